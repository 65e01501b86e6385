// functional.hpp - average-field energy functional, its gradient and sphere projection
//
//   E[u] = int |(grad + i beta A^R[|u|^2]) u|^2 + V |u|^2
//        = int |grad u|^2 + 2 beta int A.J + beta^2 int rho |A|^2 + int V rho
#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "afa/fields.hpp"
#include "afa/grid.hpp"
#include "afa/kernels.hpp"

namespace afa {

struct FunctionalParams {
    double beta = 0.0;
    double R = 0.0;
    TrapPotential trap = TrapPotential::harmonic();

    void validate() const {
        if (!std::isfinite(beta)) throw ConfigError("beta must be finite");
        if (!(R >= 0.0) || !std::isfinite(R)) throw ConfigError("R must be finite and >= 0");
        trap.validate();
    }
};

struct EnergyBreakdown {
    double kinetic = 0.0;   // int |grad u|^2
    double mixed = 0.0;     // 2 beta int A.J
    double quartic = 0.0;   // beta^2 int rho |A|^2
    double potential = 0.0; // int V rho
    double total = 0.0;

    double magnetic_kinetic() const noexcept { return kinetic + mixed + quartic; }
};

// Result of the modulus/phase form of the functional.
struct AltEnergy {
    double modulus_kinetic = 0.0; // int |grad |u||^2
    double phase_term = 0.0;      // int |Im(conj(u)/|u| grad u) + beta A |u||^2
    double potential = 0.0;
    double total = 0.0;
    // Nodes with |u| < 1e-13, where the phase term uses its |u| -> 0 limit beta^2 rho |A|^2.
    std::vector<std::size_t> vanishing_nodes;
    bool flagged() const noexcept { return !vanishing_nodes.empty(); }
};

inline constexpr double vanishing_amplitude = 1e-13;

// The functional bound to one grid: kernels and trap samples are built once.
class AverageFieldFunctional {
public:
    struct Evaluation {
        EnergyBreakdown energy;
        ScalarField gradient;
    };

    AverageFieldFunctional(GridSpec grid, FunctionalParams params)
        : grid_(grid), params_((params.validate(), params)), kernels_(sample_kernels(grid, params.R)),
          potential_(params.trap.sample(grid)) {}

    const GridSpec& grid() const noexcept { return grid_; }
    const FunctionalParams& params() const noexcept { return params_; }
    const KernelSet& kernels() const noexcept { return kernels_; }
    const RealField& potential() const noexcept { return potential_; }

    DerivedFields fields(const ScalarField& u) const {
        require_same_grid(u.grid, grid_, "functional");
        return derive_fields(u, kernels_, params_.beta != 0.0);
    }

    EnergyBreakdown energy(const ScalarField& u) const { return breakdown(fields(u)); }
    EnergyBreakdown energy(const WaveFunction& u) const { return energy(u.field()); }

    EnergyBreakdown breakdown(const DerivedFields& f) const {
        const double beta = params_.beta;
        const double w = grid_.cell_weight();
        double kin = 0.0, aj = 0.0, raa = 0.0, vr = 0.0;
        for (std::size_t k = 0; k < grid_.size(); ++k) {
            kin += std::norm(f.grad_u.x[k]) + std::norm(f.grad_u.y[k]);
            vr += potential_[k] * f.rho[k];
            if (beta != 0.0) {
                aj += f.A.x[k] * f.J.x[k] + f.A.y[k] * f.J.y[k];
                raa += f.rho[k] * (f.A.x[k] * f.A.x[k] + f.A.y[k] * f.A.y[k]);
            }
        }
        EnergyBreakdown e;
        e.kinetic = w * kin;
        e.mixed = 2.0 * beta * w * aj;
        e.quartic = beta * beta * w * raa;
        e.potential = w * vr;
        e.total = e.kinetic + e.mixed + e.quartic + e.potential;
        return e;
    }

    // First variation G with d/dt E[u + t v]|_0 = 2 Re <v, G>:
    //   G = (-i grad + beta A)^2 u + V u + W u,
    //   W = -2 beta sum_c (grad^perp w_R)_c * (J + beta rho A)_c.
    Evaluation evaluate(const ScalarField& u) const {
        const DerivedFields f = fields(u);
        EnergyBreakdown e = breakdown(f);
        ScalarField g = negative_laplacian(u);
        const double beta = params_.beta;
        for (std::size_t k = 0; k < grid_.size(); ++k) g[k] += potential_[k] * u[k];
        if (beta != 0.0) {
            // -i beta (A . D u + D . (A u))
            ScalarField ax(grid_), ay(grid_);
            for (std::size_t k = 0; k < grid_.size(); ++k) {
                ax[k] = f.A.x[k] * u[k];
                ay[k] = f.A.y[k] * u[k];
            }
            auto div = spectral::derivative(grid_, spectral::forward(ax), 0);
            const auto dy = spectral::derivative(grid_, spectral::forward(ay), 1);
            for (std::size_t k = 0; k < div.size(); ++k) div[k] += dy[k];
            const ScalarField div_au = spectral::backward(grid_, std::move(div));

            VectorField2<double> F(grid_);
            for (std::size_t k = 0; k < grid_.size(); ++k) {
                F.x[k] = f.J.x[k] + beta * f.rho[k] * f.A.x[k];
                F.y[k] = f.J.y[k] + beta * f.rho[k] * f.A.y[k];
            }
            const RealField conv = perp_dot_convolve(F, kernels_);
            const cplx minus_i_beta(0.0, -beta);
            for (std::size_t k = 0; k < grid_.size(); ++k) {
                const cplx a_du = f.A.x[k] * f.grad_u.x[k] + f.A.y[k] * f.grad_u.y[k];
                const double a2 = f.A.x[k] * f.A.x[k] + f.A.y[k] * f.A.y[k];
                const double W = -2.0 * beta * conv[k];
                g[k] += minus_i_beta * (a_du + div_au[k]) + (beta * beta * a2 + W) * u[k];
            }
        }
        return Evaluation{e, std::move(g)};
    }

    ScalarField gradient(const ScalarField& u) const { return evaluate(u).gradient; }

    AltEnergy energy_alt(const ScalarField& u) const {
        const DerivedFields f = fields(u);
        RealField modulus(grid_);
        for (std::size_t k = 0; k < grid_.size(); ++k) modulus[k] = std::abs(u[k]);
        const auto dmod = spectral_gradient(modulus);
        const double beta = params_.beta;
        const double w = grid_.cell_weight();
        AltEnergy out;
        double mk = 0.0, ph = 0.0, vr = 0.0;
        for (std::size_t k = 0; k < grid_.size(); ++k) {
            mk += dmod.x[k] * dmod.x[k] + dmod.y[k] * dmod.y[k];
            vr += potential_[k] * f.rho[k];
            const double a = modulus[k];
            const double ax = beta != 0.0 ? f.A.x[k] : 0.0;
            const double ay = beta != 0.0 ? f.A.y[k] : 0.0;
            if (a < vanishing_amplitude) {
                out.vanishing_nodes.push_back(k);
                ph += beta * beta * f.rho[k] * (ax * ax + ay * ay);
            } else {
                const double px = f.J.x[k] / a + beta * ax * a;
                const double py = f.J.y[k] / a + beta * ay * a;
                ph += px * px + py * py;
            }
        }
        out.modulus_kinetic = w * mk;
        out.phase_term = w * ph;
        out.potential = w * vr;
        out.total = out.modulus_kinetic + out.phase_term + out.potential;
        return out;
    }

    // int |grad |u||^2 with a spectral gradient of |u|.
    double modulus_kinetic(const ScalarField& u) const {
        RealField modulus(grid_);
        for (std::size_t k = 0; k < grid_.size(); ++k) modulus[k] = std::abs(u[k]);
        const auto d = spectral_gradient(modulus);
        double acc = 0.0;
        for (std::size_t k = 0; k < grid_.size(); ++k) acc += d.x[k] * d.x[k] + d.y[k] * d.y[k];
        return acc * grid_.cell_weight();
    }

    // |beta| int curl(A^R) rho = 2 pi |beta| int rho (rho * disc average); for R = 0
    // this is 2 pi |beta| int rho^2 up to the spectral curl.
    double magnetic_lower_bound(const ScalarField& u) const {
        const RealField rho = density(u);
        const RealField c = curl_A(vector_potential(rho, kernels_));
        double acc = 0.0;
        for (std::size_t k = 0; k < grid_.size(); ++k) acc += c[k] * rho[k];
        return std::abs(params_.beta) * acc * grid_.cell_weight();
    }

private:
    GridSpec grid_;
    FunctionalParams params_;
    KernelSet kernels_;
    RealField potential_;
};

inline EnergyBreakdown energy(const WaveFunction& u, const FunctionalParams& params) {
    return AverageFieldFunctional(u.grid(), params).energy(u);
}

inline AltEnergy energy_alt(const WaveFunction& u, const FunctionalParams& params) {
    return AverageFieldFunctional(u.grid(), params).energy_alt(u.field());
}

inline ScalarField gradient(const WaveFunction& u, const FunctionalParams& params) {
    return AverageFieldFunctional(u.grid(), params).gradient(u.field());
}

// Tangent projection g - Re<u, g> u onto the unit sphere at u.
inline ScalarField sphere_project(const ScalarField& g, const ScalarField& u) {
    const double c = inner(u, g).real();
    ScalarField out = g;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] -= c * u[k];
    return out;
}

inline ScalarField sphere_project(const ScalarField& g, const WaveFunction& u) {
    return sphere_project(g, u.field());
}

} // namespace afa
