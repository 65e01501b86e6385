// sweep.hpp - parameter sweeps of the minimizer with warm starts
#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "afa/manybody.hpp"
#include "afa/solver.hpp"

namespace afa {

enum class SweepAxis { beta, R, N, s };

inline std::string to_string(SweepAxis a) {
    switch (a) {
    case SweepAxis::beta: return "beta";
    case SweepAxis::R: return "R";
    case SweepAxis::N: return "N";
    case SweepAxis::s: return "s";
    }
    return "unknown";
}

inline SweepAxis sweep_axis_from_string(const std::string& s) {
    if (s == "beta") return SweepAxis::beta;
    if (s == "R") return SweepAxis::R;
    if (s == "N") return SweepAxis::N;
    if (s == "s") return SweepAxis::s;
    throw ConfigError("unknown sweep axis '" + s + "' (expected beta, R, N or s)");
}

struct SweepBase {
    FunctionalParams params;
    GridSpec grid{128, 6.0};
    SolverConfig solver;
    // Re-solve from the cold start when a warm-started row ends above the previous row.
    bool cold_restart = true;
};

struct SweepRow {
    double axis_value = 0.0;
    double total = std::numeric_limits<double>::quiet_NaN();
    double kinetic = std::numeric_limits<double>::quiet_NaN();
    double mixed = std::numeric_limits<double>::quiet_NaN();
    double quartic = std::numeric_limits<double>::quiet_NaN();
    double potential = std::numeric_limits<double>::quiet_NaN();
    bool converged = false;
    double grad_norm = std::numeric_limits<double>::quiet_NaN();
    int iterations = 0;
    bool failed = false;
    bool cold_restarted = false;
    std::string error;
    std::vector<std::string> warnings;
};

namespace detail {

inline void fill_row(SweepRow& row, const SolveResult& r) {
    row.total = r.breakdown.total;
    row.kinetic = r.breakdown.kinetic;
    row.mixed = r.breakdown.mixed;
    row.quartic = r.breakdown.quartic;
    row.potential = r.breakdown.potential;
    row.converged = r.converged;
    row.grad_norm = r.grad_norm;
    row.iterations = r.iterations;
    row.warnings = r.warnings;
}

inline FunctionalParams with_axis(FunctionalParams p, SweepAxis axis, double v) {
    switch (axis) {
    case SweepAxis::beta: p.beta = v; break;
    case SweepAxis::R: p.R = v; break;
    case SweepAxis::s: p.trap.exponent = v; break;
    case SweepAxis::N: break;
    }
    return p;
}

} // namespace detail

// N axis: the average-field minimizer is computed once for the base
// parameters and each row is the product-state energy per particle of that
// minimizer; its quartic column holds three_body + singular.
inline std::vector<SweepRow> sweep_particle_number(const std::vector<double>& values, const SweepBase& base) {
    std::vector<SweepRow> rows;
    std::optional<ProductStateEvaluator> ev;
    std::optional<SolveResult> sol;
    std::string setup_error;
    try {
        sol.emplace(minimize(base.params, base.grid, base.solver));
        ev.emplace(sol->u, base.params.R, base.params.trap);
    } catch (const std::exception& e) {
        setup_error = e.what();
    }
    for (double v : values) {
        SweepRow row;
        row.axis_value = v;
        try {
            if (!ev) throw NumericalError(setup_error);
            if (!(v >= 2.0) || v != std::floor(v)) throw ConfigError("N must be an integer >= 2");
            const ManyBodyBreakdown b = ev->evaluate(static_cast<long>(v), base.params.beta);
            row.total = b.per_particle_total;
            row.kinetic = b.kinetic;
            row.mixed = b.mixed;
            row.quartic = b.three_body + b.singular;
            row.potential = b.potential;
            row.converged = sol->converged;
            row.grad_norm = sol->grad_norm;
            row.iterations = sol->iterations;
            row.warnings = sol->warnings;
        } catch (const std::exception& e) {
            row.failed = true;
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

// Minimizations along the axis in the given order, each warm-started from the
// previous successful row. A failing row is flagged and the sweep continues.
inline std::vector<SweepRow> sweep(SweepAxis axis, const std::vector<double>& values, const SweepBase& base) {
    if (values.empty()) throw ConfigError("sweep needs at least one value");
    base.params.validate();
    base.solver.validate();
    if (axis == SweepAxis::N) return sweep_particle_number(values, base);

    std::vector<SweepRow> rows;
    std::optional<WaveFunction> warm;
    std::optional<double> prev_total;
    for (double v : values) {
        SweepRow row;
        row.axis_value = v;
        try {
            const FunctionalParams p = detail::with_axis(base.params, axis, v);
            const AverageFieldFunctional F(base.grid, p);
            SolverConfig cfg = base.solver;
            if (warm) {
                cfg.init = InitKind::from_file;
                cfg.initial_state = *warm;
            }
            SolveResult r = minimize(F, cfg);
            if (warm && base.cold_restart && prev_total && r.breakdown.total > *prev_total) {
                SolveResult cold = minimize(F, base.solver);
                if (cold.breakdown.total < r.breakdown.total) {
                    r = std::move(cold);
                    row.cold_restarted = true;
                }
            }
            detail::fill_row(row, r);
            prev_total = r.breakdown.total;
            warm = std::move(r.u);
        } catch (const std::exception& e) {
            row.failed = true;
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os.precision(17);
    os << "axis_value,total,kinetic,mixed,quartic,potential,converged,grad_norm,iterations\n";
    for (const SweepRow& r : rows)
        os << r.axis_value << ',' << r.total << ',' << r.kinetic << ',' << r.mixed << ',' << r.quartic << ','
           << r.potential << ',' << (r.converged ? 1 : 0) << ',' << r.grad_norm << ',' << r.iterations << '\n';
    return os.str();
}

} // namespace afa
