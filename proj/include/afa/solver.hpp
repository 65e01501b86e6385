// solver.hpp - minimization of the average-field functional on the unit sphere
//
// Preconditioned projected gradient descent with Armijo backtracking and the
// normalization retraction:
//   d_k     = -(P r_k - c P u_k),  r_k = G(u_k) - Re<u_k, G(u_k)> u_k,
//   u_{k+1} = (u_k + tau d_k) / ||u_k + tau d_k||,
// where c makes d_k tangent and P is a positive kinetic/trap preconditioner.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "afa/functional.hpp"

namespace afa {

enum class InitKind { gaussian, gaussian_vortex, from_file, seeded_random_perturbation };

inline std::string to_string(InitKind k) {
    switch (k) {
    case InitKind::gaussian: return "gaussian";
    case InitKind::gaussian_vortex: return "gaussian_vortex";
    case InitKind::from_file: return "from_file";
    case InitKind::seeded_random_perturbation: return "seeded_random_perturbation";
    }
    return "unknown";
}

inline InitKind init_kind_from_string(const std::string& s) {
    if (s == "gaussian") return InitKind::gaussian;
    if (s == "gaussian_vortex") return InitKind::gaussian_vortex;
    if (s == "from_file") return InitKind::from_file;
    if (s == "seeded_random_perturbation" || s == "random") return InitKind::seeded_random_perturbation;
    throw ConfigError("unknown init kind '" + s + "'");
}

struct SolverConfig {
    int max_iters = 20000;
    double tol_energy = 1e-10; // relative energy decrease
    double tol_grad = 1e-7;    // L2 norm of the projected gradient
    double step0 = 0.1;
    double backtrack = 0.5;
    double armijo = 1e-4;
    int max_halvings = 60;
    InitKind init = InitKind::gaussian;
    std::uint64_t seed = 0;
    std::optional<WaveFunction> initial_state; // used when init == from_file (and by sweeps)
    bool precondition = true;
    bool conjugate = true; // nonlinear conjugate gradient instead of plain descent

    void validate() const {
        if (max_iters < 0) throw ConfigError("max_iters must be >= 0");
        if (!(tol_energy > 0.0) || !(tol_grad > 0.0)) throw ConfigError("tolerances must be positive");
        if (!(step0 > 0.0)) throw ConfigError("step0 must be positive");
        if (!(backtrack > 0.0 && backtrack < 1.0)) throw ConfigError("backtrack shrink must lie in (0, 1)");
        if (!(armijo > 0.0 && armijo < 1.0)) throw ConfigError("Armijo constant must lie in (0, 1)");
        if (init == InitKind::from_file && !initial_state) throw ConfigError("init from_file needs a state");
    }
};

struct SolveResult {
    WaveFunction u;
    EnergyBreakdown breakdown;
    int iterations = 0;
    bool converged = false;
    double grad_norm = 0.0;
    double boundary_mass = 0.0;
    std::vector<double> energy_history; // total energy of every accepted iterate, starting with the initial state
    std::vector<std::string> warnings;
};

// Numerical failure inside the minimizer; carries the last valid iterate.
class SolverError : public NumericalError {
public:
    enum class Kind { non_finite, stalled };
    SolverError(Kind kind, const std::string& what, WaveFunction last)
        : NumericalError(what), kind_(kind), last_(std::move(last)) {}
    Kind kind() const noexcept { return kind_; }
    const WaveFunction& last_state() const noexcept { return last_; }

private:
    Kind kind_;
    WaveFunction last_;
};

// Length scale of the power trap ground state: c^{-1/(s+2)}.
inline double trap_length(const TrapPotential& trap) { return std::pow(trap.strength, -1.0 / (trap.exponent + 2.0)); }

inline WaveFunction gaussian_state(const GridSpec& g, double width, bool vortex = false) {
    const double s2 = width * width;
    auto f = ScalarField::sample(g, [&](double x, double y) {
        const double env = std::exp(-(x * x + y * y) / (2.0 * s2));
        return vortex ? cplx(x, y) * env : cplx(env, 0.0);
    });
    return WaveFunction(std::move(f)).normalized();
}

// Gaussian times a smooth random amplitude modulation and a smooth random phase.
inline WaveFunction perturbed_gaussian_state(const GridSpec& g, double width, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    struct Bump { double cx, cy, amp, phase_kx, phase_ky; };
    std::vector<Bump> bumps(4);
    for (Bump& b : bumps) b = {uni(rng) * width, uni(rng) * width, 0.2 * uni(rng), 0.3 * uni(rng), 0.3 * uni(rng)};
    auto f = ScalarField::sample(g, [&](double x, double y) {
        double amp = 1.0, phase = 0.0;
        for (const Bump& b : bumps) {
            const double d2 = ((x - b.cx) * (x - b.cx) + (y - b.cy) * (y - b.cy)) / (width * width);
            const double e = std::exp(-d2);
            amp += b.amp * e;
            phase += (b.phase_kx * x + b.phase_ky * y) * e / width;
        }
        return std::polar(amp * std::exp(-(x * x + y * y) / (2.0 * width * width)), phase);
    });
    return WaveFunction(std::move(f)).normalized();
}

inline WaveFunction initial_state(const GridSpec& g, const FunctionalParams& params, const SolverConfig& cfg) {
    const double width = trap_length(params.trap);
    switch (cfg.init) {
    case InitKind::gaussian: return gaussian_state(g, width);
    case InitKind::gaussian_vortex: return gaussian_state(g, width, true);
    case InitKind::seeded_random_perturbation: return perturbed_gaussian_state(g, width, cfg.seed);
    case InitKind::from_file:
        require_same_grid(cfg.initial_state->grid(), g, "initial state");
        return cfg.initial_state->normalized();
    }
    throw ConfigError("unknown init kind");
}

// Relative slope below which a descent step cannot be resolved in double precision.
inline constexpr double roundoff_floor = 1e-12;

namespace detail {

// P r = P_V^{1/2} (shift - Delta)^{-1} P_V^{1/2} r with P_V = shift (shift + V)^{-1}.
class Preconditioner {
public:
    Preconditioner(const GridSpec& g, const RealField& V) : grid_(g), V_(V) {}

    ScalarField apply(const ScalarField& r, double shift) const {
        ScalarField t(grid_);
        for (std::size_t k = 0; k < t.size(); ++k) t[k] = r[k] * std::sqrt(shift / (shift + V_[k]));
        auto hat = spectral::forward(t);
        const std::size_t n = grid_.n();
        for (std::size_t j = 0; j < n; ++j) {
            const double ky = grid_.derivative_wavenumber(j);
            for (std::size_t i = 0; i < n; ++i) {
                const double kx = grid_.derivative_wavenumber(i);
                hat[j * n + i] /= shift + kx * kx + ky * ky;
            }
        }
        t = spectral::backward(grid_, std::move(hat));
        for (std::size_t k = 0; k < t.size(); ++k) t[k] *= std::sqrt(shift / (shift + V_[k]));
        return t;
    }

private:
    GridSpec grid_;
    const RealField& V_;
};

inline double re_inner(const ScalarField& a, const ScalarField& b) { return inner(a, b).real(); }

} // namespace detail

inline SolveResult minimize(const AverageFieldFunctional& F, const SolverConfig& cfg) {
    cfg.validate();
    const GridSpec& g = F.grid();
    const FunctionalParams& params = F.params();
    WaveFunction u = initial_state(g, params, cfg);
    const detail::Preconditioner precond(g, F.potential());

    SolveResult res{u, {}, 0, false, 0.0, 0.0, {}, {}};
    auto eval = F.evaluate(u.field());
    if (!std::isfinite(eval.energy.total))
        throw SolverError(SolverError::Kind::non_finite, "initial energy is not finite", u);
    res.energy_history.push_back(eval.energy.total);

    double tau = cfg.step0;
    double grad_norm = 0.0;
    double last_decrease = std::numeric_limits<double>::infinity();
    double prev_rz = 0.0;
    ScalarField prev_z(g), prev_d(g);
    int it = 0;
    for (;; ++it) {
        const double lambda = detail::re_inner(u.field(), eval.gradient);
        ScalarField r = sphere_project(eval.gradient, u.field());
        grad_norm = std::sqrt(norm_sq(r));
        const double E = eval.energy.total;
        const bool energy_ok = last_decrease <= cfg.tol_energy * std::max(1.0, std::abs(E));
        if (grad_norm < cfg.tol_grad && energy_ok) {
            res.converged = true;
            break;
        }
        if (it >= cfg.max_iters) break;

        // Preconditioned gradient z, made tangent in the preconditioned metric.
        ScalarField z(g);
        if (cfg.precondition) {
            const double shift = std::max(std::abs(lambda), 1.0);
            const ScalarField pr = precond.apply(r, shift);
            const ScalarField pu = precond.apply(u.field(), shift);
            const double c = detail::re_inner(u.field(), pr) / detail::re_inner(u.field(), pu);
            for (std::size_t k = 0; k < z.size(); ++k) z[k] = pr[k] - c * pu[k];
        } else {
            z = r;
        }
        // Polak-Ribiere+ conjugation; the previous direction is transported by
        // projecting it onto the current tangent space.
        ScalarField d(g);
        const double rz = detail::re_inner(r, z);
        double gamma = 0.0;
        if (cfg.conjugate && prev_rz > 0.0) gamma = std::max(0.0, (rz - detail::re_inner(r, prev_z)) / prev_rz);
        for (std::size_t k = 0; k < d.size(); ++k) d[k] = -z[k];
        if (gamma > 0.0) {
            const ScalarField dp = sphere_project(prev_d, u.field());
            for (std::size_t k = 0; k < d.size(); ++k) d[k] += gamma * dp[k];
        }
        double slope = 2.0 * detail::re_inner(d, eval.gradient);
        if (gamma > 0.0 && !(slope < 0.0)) {
            for (std::size_t k = 0; k < d.size(); ++k) d[k] = -z[k];
            slope = 2.0 * detail::re_inner(d, eval.gradient);
        }
        if (!(slope < 0.0)) {
            if (grad_norm < cfg.tol_grad || std::abs(slope) <= roundoff_floor * std::max(1.0, std::abs(E))) {
                res.converged = true;
                break;
            }
            throw SolverError(SolverError::Kind::stalled, "search direction is not a descent direction", u);
        }

        bool accepted = false;
        for (int halving = 0; halving <= cfg.max_halvings; ++halving) {
            ScalarField trial = u.field();
            for (std::size_t k = 0; k < trial.size(); ++k) trial[k] += tau * d[k];
            WaveFunction cand = WaveFunction(std::move(trial)).normalized();
            auto cand_eval = F.evaluate(cand.field());
            const double Ec = cand_eval.energy.total;
            if (!std::isfinite(Ec)) {
                tau *= cfg.backtrack;
                continue;
            }
            if (Ec <= E + cfg.armijo * tau * slope && Ec < E) {
                last_decrease = E - Ec;
                u = std::move(cand);
                eval = std::move(cand_eval);
                res.energy_history.push_back(Ec);
                accepted = true;
                break;
            }
            tau *= cfg.backtrack;
        }
        if (!accepted) {
            if (grad_norm < cfg.tol_grad) {
                res.converged = true;
                break;
            }
            // Energy already stagnant, or the predicted decrease is below the
            // resolution of the energy itself: the residual is round-off.
            if (last_decrease <= cfg.tol_energy * std::max(1.0, std::abs(E)) ||
                -slope <= roundoff_floor * std::max(1.0, std::abs(E))) {
                res.converged = true;
                res.warnings.push_back("projected gradient " + std::to_string(grad_norm) +
                                       " above tol_grad but the energy is stationary at round-off level");
                break;
            }
            if (!std::isfinite(eval.energy.total))
                throw SolverError(SolverError::Kind::non_finite, "non-finite energy", u);
            throw SolverError(SolverError::Kind::stalled,
                              "no Armijo step after " + std::to_string(cfg.max_halvings) + " halvings", u);
        }
        tau = std::min(tau * 2.0, 1e6);
        prev_rz = rz;
        prev_z = std::move(z);
        prev_d = std::move(d);
    }

    res.iterations = it;
    res.grad_norm = grad_norm;
    res.breakdown = eval.energy;
    const RealField rho = density(u);
    res.boundary_mass = boundary_mass(rho);
    if (res.boundary_mass > 1e-12)
        res.warnings.push_back("boundary mass " + std::to_string(res.boundary_mass) +
                               " exceeds 1e-12; enlarge the box");
    res.u = std::move(u);
    return res;
}

inline SolveResult minimize(const FunctionalParams& params, const GridSpec& spec, const SolverConfig& cfg) {
    return minimize(AverageFieldFunctional(spec, params), cfg);
}

// Phase winding of u along the square contour max(|x|, |y|) = radius.
inline long winding_number(const WaveFunction& u, double radius) {
    const GridSpec& g = u.grid();
    const long c = static_cast<long>(g.origin_index());
    const long m = std::clamp(static_cast<long>(std::lround(radius / g.h())), 1L, c - 1);
    std::vector<cplx> loop;
    for (long i = -m; i < m; ++i) loop.push_back(u.field().at(c + i, c - m));
    for (long j = -m; j < m; ++j) loop.push_back(u.field().at(c + m, c + j));
    for (long i = m; i > -m; --i) loop.push_back(u.field().at(c + i, c + m));
    for (long j = m; j > -m; --j) loop.push_back(u.field().at(c - m, c + j));
    double total = 0.0;
    for (std::size_t k = 0; k < loop.size(); ++k) total += std::arg(loop[(k + 1) % loop.size()] / loop[k]);
    return std::lround(total / (2.0 * std::numbers::pi));
}

} // namespace afa
