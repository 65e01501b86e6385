// fields.hpp - density, current and self-generated vector potential
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "afa/grid.hpp"
#include "afa/kernels.hpp"

namespace afa {

inline RealField density(const ScalarField& u) {
    RealField rho(u.grid);
    for (std::size_t k = 0; k < u.size(); ++k) rho[k] = std::norm(u[k]);
    return rho;
}

inline RealField density(const WaveFunction& u) { return density(u.field()); }

// J = Im(conj(u) grad u), given grad u.
inline VectorField2<double> current_from_gradient(const ScalarField& u, const VectorField2<cplx>& grad) {
    require_same_grid(u.grid, grad.grid(), "current");
    VectorField2<double> J(u.grid);
    for (std::size_t k = 0; k < u.size(); ++k) {
        const cplx ub = std::conj(u[k]);
        J.x[k] = (ub * grad.x[k]).imag();
        J.y[k] = (ub * grad.y[k]).imag();
    }
    return J;
}

// J[u] = (i/2)(u grad conj(u) - conj(u) grad u), both gradients spectral.
// The imaginary residue must be round-off; anything above 1e-8 (relative to
// the current scale) signals a broken derivative.
inline VectorField2<double> current(const WaveFunction& wf) {
    const ScalarField& u = wf.field();
    ScalarField ub(u.grid);
    for (std::size_t k = 0; k < u.size(); ++k) ub[k] = std::conj(u[k]);
    const auto du = spectral_gradient(u);
    const auto dub = spectral_gradient(ub);
    VectorField2<double> J(u.grid);
    double residue = 0.0;
    double scale = 0.0;
    const cplx half_i(0.0, 0.5);
    for (std::size_t k = 0; k < u.size(); ++k) {
        const cplx jx = half_i * (u[k] * dub.x[k] - ub[k] * du.x[k]);
        const cplx jy = half_i * (u[k] * dub.y[k] - ub[k] * du.y[k]);
        residue = std::max({residue, std::abs(jx.imag()), std::abs(jy.imag())});
        scale = std::max({scale, std::abs(jx.real()), std::abs(jy.real())});
        J.x[k] = jx.real();
        J.y[k] = jy.real();
    }
    if (residue > 1e-8 * std::max(1.0, scale))
        throw NumericalError("current: imaginary residue " + std::to_string(residue) + " exceeds 1e-8");
    return J;
}

// A^R[rho] = grad^perp w_R * rho
inline VectorField2<double> vector_potential(const RealField& rho, const KernelSet& kernels) {
    const ScalarField packed = convolve(rho, kernels.grad_perp);
    VectorField2<double> A(rho.grid);
    for (std::size_t k = 0; k < rho.size(); ++k) {
        A.x[k] = packed[k].real();
        A.y[k] = packed[k].imag();
    }
    return A;
}

// sum_c (grad^perp w_R)_c * F_c
inline RealField perp_dot_convolve(const VectorField2<double>& F, const KernelSet& kernels) {
    ScalarField z(F.grid());
    for (std::size_t k = 0; k < z.size(); ++k) z[k] = cplx(F.x[k], -F.y[k]);
    return real_part(convolve(z, kernels.grad_perp));
}

namespace detail {

// Counterclockwise circulation of A around the square through the outermost
// grid lines, trapezoid rule.
inline double box_circulation(const VectorField2<double>& A) {
    const GridSpec& g = A.grid();
    const std::size_t n = g.n(), last = n - 1;
    auto edge = [&](auto&& sample) {
        double acc = 0.5 * (sample(0) + sample(last));
        for (std::size_t k = 1; k < last; ++k) acc += sample(k);
        return acc * g.h();
    };
    const double bottom = edge([&](std::size_t i) { return A.x.at(i, 0); });
    const double right = edge([&](std::size_t j) { return A.y.at(last, j); });
    const double top = edge([&](std::size_t i) { return A.x.at(i, last); });
    const double left = edge([&](std::size_t j) { return A.y.at(0, j); });
    return bottom + right - top - left;
}

} // namespace detail

// Spectral curl of A. A decays only like 1/|x|, so its net flux cannot live on
// the periodic box: the monopole part M x^perp (1 - e^{-|x|^2/s^2}) / |x|^2,
// with M from the circulation around the box edge, is removed before
// differentiating and its curl 2M e^{-|x|^2/s^2} / s^2 added back.
inline RealField curl_A(const VectorField2<double>& A) {
    const GridSpec& g = A.grid();
    const double M = detail::box_circulation(A) / (2.0 * std::numbers::pi);
    const double s = g.half_width() / 5.0, s2 = s * s;
    VectorField2<double> rest = A;
    for (std::size_t j = 0; j < g.n(); ++j)
        for (std::size_t i = 0; i < g.n(); ++i) {
            const double x = g.coord(i), y = g.coord(j), r2 = x * x + y * y;
            const double f = r2 > 0.0 ? -std::expm1(-r2 / s2) / r2 : 1.0 / s2;
            rest.x.at(i, j) += M * y * f;
            rest.y.at(i, j) -= M * x * f;
        }
    RealField c = spectral_curl(rest);
    for (std::size_t j = 0; j < g.n(); ++j)
        for (std::size_t i = 0; i < g.n(); ++i) {
            const double x = g.coord(i), y = g.coord(j);
            c.at(i, j) += 2.0 * M * std::exp(-(x * x + y * y) / s2) / s2;
        }
    return c;
}

// rho * (disc average over B(0, R)) recovered as curl A^R / (2 pi); equals rho
// itself for R = 0.
inline RealField smeared_density(const VectorField2<double>& A) {
    RealField c = curl_A(A);
    for (double& v : c.values) v /= 2.0 * std::numbers::pi;
    return c;
}

// All fields derived from a state for a given kernel set.
struct DerivedFields {
    RealField rho;
    VectorField2<cplx> grad_u;
    VectorField2<double> J;
    VectorField2<double> A;
};

inline DerivedFields derive_fields(const ScalarField& u, const KernelSet& kernels, bool need_potential = true) {
    RealField rho = density(u);
    auto grad = spectral_gradient(u);
    auto J = current_from_gradient(u, grad);
    VectorField2<double> A = need_potential ? vector_potential(rho, kernels) : VectorField2<double>(u.grid);
    return DerivedFields{std::move(rho), std::move(grad), std::move(J), std::move(A)};
}

} // namespace afa
