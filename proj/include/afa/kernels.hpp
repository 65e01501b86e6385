// kernels.hpp - smeared Coulomb kernel family, trap potentials, scaling utilities
//
// w_R = log|.| * (disc indicator / (pi R^2)).  By Newton's theorem
//   w_R(x)    = log|x|                          for |x| >= R
//             = log R + (|x|^2 / R^2 - 1) / 2   for |x| <  R
//   grad w_R  = x / |x|^2  outside,  x / R^2  inside.
// R = 0 selects the point kernel w_0 = log|.|.
#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>

#include "afa/error.hpp"
#include "afa/grid.hpp"

namespace afa {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend bool operator==(Vec2, Vec2) = default;
    double norm() const { return std::hypot(x, y); }
    double norm_sq() const { return x * x + y * y; }
    // (x, y)^perp = (-y, x)
    Vec2 perp() const { return {-y, x}; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

class SmearedCoulomb {
public:
    explicit SmearedCoulomb(double radius) : radius_(radius) {
        if (!(radius >= 0.0) || !std::isfinite(radius))
            throw DomainError("smearing radius must be finite and >= 0");
    }

    double radius() const noexcept { return radius_; }

    double value(Vec2 p) const {
        const double r2 = p.norm_sq();
        if (radius_ == 0.0) {
            if (r2 == 0.0) throw DomainError("w_0 is singular at the origin");
            return 0.5 * std::log(r2);
        }
        if (r2 >= radius_ * radius_) return 0.5 * std::log(r2);
        return std::log(radius_) + 0.5 * (r2 / (radius_ * radius_) - 1.0);
    }

    // For R = 0 the origin is a domain error here; grid sampling uses the odd
    // principal-value convention grad w_0(0) = 0 instead.
    Vec2 gradient(Vec2 p) const {
        const double r2 = p.norm_sq();
        if (radius_ == 0.0) {
            if (r2 == 0.0) throw DomainError("grad w_0 is singular at the origin");
            return (1.0 / r2) * p;
        }
        const double R2 = radius_ * radius_;
        return (1.0 / (r2 >= R2 ? r2 : R2)) * p;
    }

private:
    double radius_;
};

inline double w_R(double R, Vec2 p) { return SmearedCoulomb(R).value(p); }
inline Vec2 grad_w_R(double R, Vec2 p) { return SmearedCoulomb(R).gradient(p); }

// Exact L^p norm of grad w_R:
//   ||grad w_R||_p^p = 2 pi R^{2-p} (1/(p+2) + 1/(p-2)).
inline double lp_norm_grad_w(double R, double p) {
    if (!(p > 2.0)) throw DomainError("||grad w_R||_p is infinite for p <= 2");
    if (!(R > 0.0)) throw DomainError("||grad w_R||_p requires R > 0");
    const double pth = 2.0 * std::numbers::pi * std::pow(R, 2.0 - p) * (1.0 / (p + 2.0) + 1.0 / (p - 2.0));
    return std::pow(pth, 1.0 / p);
}

// Largest admissible exponent for R ~ N^{-eta} in a trap growing like |x|^s.
inline double eta0(double s) {
    if (!(s > 0.0)) throw DomainError("eta0: trap exponent must be positive");
    return 0.25 / (1.0 + 1.0 / s);
}

// Statistics parameter alpha = beta / (N - 1).
inline double alpha_of(double beta, long N) {
    if (N < 2) throw DomainError("alpha_of: need N >= 2");
    return beta / static_cast<double>(N - 1);
}

// V(x) = c |x|^s
struct TrapPotential {
    double strength = 1.0;
    double exponent = 2.0;

    static TrapPotential harmonic() { return {1.0, 2.0}; }

    void validate() const {
        if (!(strength > 0.0) || !(exponent > 0.0))
            throw ConfigError("trap: strength and exponent must be positive");
    }

    double operator()(double x, double y) const {
        const double r2 = x * x + y * y;
        if (r2 == 0.0) return 0.0;
        return strength * (exponent == 2.0 ? r2 : std::pow(r2, 0.5 * exponent));
    }

    RealField sample(const GridSpec& g) const {
        validate();
        return RealField::sample(g, [this](double x, double y) { return (*this)(x, y); });
    }
};

// Kernels sampled on the padded grid.
struct KernelSet {
    double R;
    // grad w_R components, centered padded layout (origin sample 0).
    aligned_vector<double> grad_w_x;
    aligned_vector<double> grad_w_y;
    // grad^perp w_R packed as (-d2 w) + i (d1 w); convolving a real density with it
    // yields A_1 + i A_2.
    PaddedKernel<cplx> grad_perp;
    // |grad w_R|^2, only for R > 0 (not locally integrable at R = 0).
    std::optional<PaddedKernel<double>> grad_w_sq;
    // w_R samples; for R = 0 the origin holds log(h/2). Diagnostics only.
    aligned_vector<double> w;

    const GridSpec& grid() const noexcept { return grad_perp.grid(); }
};

inline KernelSet sample_kernels(const GridSpec& g, double R) {
    const SmearedCoulomb kernel(R);
    const std::size_t m = g.padded_n();
    const long n = static_cast<long>(g.n());
    const double h = g.h();
    aligned_vector<double> gx(g.padded_size()), gy(g.padded_size()), w(g.padded_size());
    aligned_vector<cplx> perp(g.padded_size());
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            const long mx = static_cast<long>(i) - n;
            const long my = static_cast<long>(j) - n;
            const std::size_t k = j * m + i;
            if (mx == 0 && my == 0) {
                gx[k] = gy[k] = 0.0;
                w[k] = R > 0.0 ? kernel.value({0.0, 0.0}) : std::log(0.5 * h);
            } else {
                const Vec2 p{static_cast<double>(mx) * h, static_cast<double>(my) * h};
                const Vec2 d = kernel.gradient(p);
                gx[k] = d.x;
                gy[k] = d.y;
                w[k] = kernel.value(p);
            }
            perp[k] = cplx(-gy[k], gx[k]);
        }
    }
    std::optional<PaddedKernel<double>> sq;
    if (R > 0.0) {
        aligned_vector<double> s(g.padded_size());
        for (std::size_t k = 0; k < s.size(); ++k) s[k] = gx[k] * gx[k] + gy[k] * gy[k];
        sq.emplace(g, std::move(s));
    }
    return KernelSet{R, std::move(gx), std::move(gy), PaddedKernel<cplx>(g, std::move(perp)), std::move(sq),
                     std::move(w)};
}

} // namespace afa
