// verify.hpp - randomized verification suites with JSON reports
//
// Each suite returns a report with one entry per check: pass flag, measured
// constants and, where sampling is involved, the worst case together with
// everything needed to replay it. replay_report() re-evaluates the worst cases
// of a stored report.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "json.hpp"

#include "afa/functional.hpp"
#include "afa/geometry.hpp"
#include "afa/kernels.hpp"
#include "afa/manybody.hpp"
#include "afa/random_states.hpp"
#include "afa/version.hpp"

namespace afa {

using json = nlohmann::json;

enum class Suite { kernels, geometry, functional_inequalities, manybody_identities };

inline std::string to_string(Suite s) {
    switch (s) {
    case Suite::kernels: return "kernels";
    case Suite::geometry: return "geometry";
    case Suite::functional_inequalities: return "functional-inequalities";
    case Suite::manybody_identities: return "manybody-identities";
    }
    return "unknown";
}

inline Suite suite_from_string(const std::string& s) {
    if (s == "kernels") return Suite::kernels;
    if (s == "geometry") return Suite::geometry;
    if (s == "functional-inequalities") return Suite::functional_inequalities;
    if (s == "manybody-identities") return Suite::manybody_identities;
    throw ConfigError("unknown verification suite '" + s + "'");
}

struct VerifyOptions {
    std::uint64_t seed = 42;
    // Triangles per regime (geometry), random points (kernels), random states
    // (functional-inequalities) or phased states (manybody-identities).
    // Zero selects the suite default.
    std::uint64_t samples = 0;
    std::size_t grid_n = 64;
    double box = 6.0;
    std::uint64_t mc_samples = 1000000; // Monte Carlo triples per radial density
    unsigned threads = thread_count();
};

inline std::uint64_t default_samples(Suite s) {
    switch (s) {
    case Suite::kernels: return 100000;
    case Suite::geometry: return 100000;
    case Suite::functional_inequalities: return 100;
    case Suite::manybody_identities: return 20;
    }
    return 0;
}

namespace detail {

inline json check(std::string name, bool pass, json measured = json::object()) {
    return json{{"name", std::move(name)}, {"pass", pass}, {"measured", std::move(measured)}};
}

inline json point_json(Point<double> p) { return json::array({p.x, p.y}); }
inline Point<double> point_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

inline json triangle_json(const Triangle<double>& t) {
    return json{{"x", point_json(t.x)}, {"y", point_json(t.y)}, {"z", point_json(t.z)}};
}
inline Triangle<double> triangle_from(const json& j) {
    return {point_from(j.at("x")), point_from(j.at("y")), point_from(j.at("z"))};
}

} // namespace detail

// ---------------------------------------------------------------- kernels

// Disc average of log|x - y| over B(0, R) by nested adaptive quadrature.
inline double disc_average_log(Vec2 x, double R) {
    using boost::math::quadrature::gauss_kronrod;
    const double r = x.norm();
    auto ring = [&](double rho) {
        auto f = [&](double th) { return 0.5 * std::log(r * r + rho * rho - 2.0 * r * rho * std::cos(th)); };
        return rho * (gauss_kronrod<double, 31>::integrate(f, 0.0, std::numbers::pi, 12, 1e-13) * 2.0);
    };
    double total = 0.0;
    if (r < R) {
        total = gauss_kronrod<double, 31>::integrate(ring, 0.0, r, 10, 1e-12) +
                gauss_kronrod<double, 31>::integrate(ring, r, R, 10, 1e-12);
    } else {
        total = gauss_kronrod<double, 31>::integrate(ring, 0.0, R, 10, 1e-12);
    }
    return total / (std::numbers::pi * R * R);
}

// ||grad w_R||_p^p by radial quadrature of the two branches.
inline double lp_norm_grad_w_quadrature(double R, double p) {
    using boost::math::quadrature::gauss_kronrod;
    auto inner = [&](double r) { return std::pow(r / (R * R), p) * r; };
    auto outer = [&](double r) { return std::pow(r, 1.0 - p); };
    const double a = gauss_kronrod<double, 61>::integrate(inner, 0.0, R, 15, 1e-14);
    const double b = gauss_kronrod<double, 61>::integrate(outer, R, std::numeric_limits<double>::infinity(), 15, 1e-14);
    return std::pow(2.0 * std::numbers::pi * (a + b), 1.0 / p);
}

struct KernelCase {
    Vec2 p;
    double R = 0.0;
};

// Branch value and gradient against the two closed forms evaluated
// independently (hypot/log for the outside, polynomial inside).
inline json kernel_case_outcome(const KernelCase& c) {
    const SmearedCoulomb k(c.R);
    const double r = std::hypot(c.p.x, c.p.y);
    const bool inside = r < c.R;
    const double expected = inside ? std::log(c.R) + 0.5 * (r / c.R) * (r / c.R) - 0.5 : std::log(r);
    const double gscale = inside ? 1.0 / (c.R * c.R) : 1.0 / (r * r);
    const Vec2 g = k.gradient(c.p);
    const double value_err = std::abs(k.value(c.p) - expected) / std::max(1.0, std::abs(expected));
    const double grad_err = std::hypot(g.x - gscale * c.p.x, g.y - gscale * c.p.y) / (gscale * std::max(r, 1e-300));
    return json{{"inside", inside}, {"value_error", value_err}, {"gradient_error", grad_err},
                {"sup_ratio", c.R * g.norm()}};
}

inline json run_kernels(const VerifyOptions& opt) {
    const std::uint64_t samples = opt.samples ? opt.samples : default_samples(Suite::kernels);
    json checks = json::array();

    // Branch values on random points inside and outside the disc.
    struct Acc {
        double worst_value = 0.0, worst_grad = 0.0, sup = 0.0;
        KernelCase worst_case{}, sup_case{};
    };
    auto chunks = run_chunks<Acc>(
        samples,
        [&](std::uint64_t chunk, std::uint64_t b, std::uint64_t e) {
            Acc a;
            auto rng = chunk_rng(opt.seed, 300, chunk);
            std::uniform_real_distribution<double> logR(std::log(1e-3), std::log(10.0));
            std::uniform_real_distribution<double> frac(0.0, 3.0), ang(0.0, 2.0 * std::numbers::pi);
            for (std::uint64_t k = b; k < e; ++k) {
                const double R = std::exp(logR(rng));
                const double r = R * frac(rng), t = ang(rng);
                const KernelCase c{{r * std::cos(t), r * std::sin(t)}, R};
                if (r == 0.0) continue;
                const json o = kernel_case_outcome(c);
                const double err = std::max(o["value_error"].get<double>(), o["gradient_error"].get<double>());
                if (err > std::max(a.worst_value, a.worst_grad)) {
                    a.worst_case = c;
                }
                a.worst_value = std::max(a.worst_value, o["value_error"].get<double>());
                a.worst_grad = std::max(a.worst_grad, o["gradient_error"].get<double>());
                if (o["sup_ratio"].get<double>() > a.sup) {
                    a.sup = o["sup_ratio"].get<double>();
                    a.sup_case = c;
                }
            }
            return a;
        },
        opt.threads);
    Acc total;
    for (const Acc& a : chunks) {
        if (std::max(a.worst_value, a.worst_grad) > std::max(total.worst_value, total.worst_grad))
            total.worst_case = a.worst_case;
        total.worst_value = std::max(total.worst_value, a.worst_value);
        total.worst_grad = std::max(total.worst_grad, a.worst_grad);
        if (a.sup > total.sup) {
            total.sup = a.sup;
            total.sup_case = a.sup_case;
        }
    }
    auto case_json = [](const KernelCase& c) {
        return json{{"kind", "kernel_point"}, {"p", json::array({c.p.x, c.p.y})}, {"R", c.R}};
    };
    {
        json ch = detail::check("branch_values", total.worst_value <= 1e-14 && total.worst_grad <= 1e-14,
                                {{"max_value_error", total.worst_value}, {"max_gradient_error", total.worst_grad}});
        ch["worst"] = json{{"inputs", case_json(total.worst_case)}, {"outcome", kernel_case_outcome(total.worst_case)}};
        checks.push_back(ch);
    }
    {
        // R |grad w_R| <= 1 with equality on |x| = R.
        json ch = detail::check("gradient_sup", total.sup <= 1.0 + 1e-14, {{"sup_R_times_grad", total.sup}});
        ch["worst"] = json{{"inputs", case_json(total.sup_case)}, {"outcome", kernel_case_outcome(total.sup_case)}};
        checks.push_back(ch);
    }
    {
        // Continuity of value and gradient across |x| = R.
        double worst = 0.0;
        for (double R : {1e-3, 0.025, 0.1, 0.5, 1.0, 3.7}) {
            for (int k = 0; k < 16; ++k) {
                const double t = 2.0 * std::numbers::pi * k / 16.0;
                const Vec2 p{R * std::cos(t), R * std::sin(t)};
                const double r2 = p.norm_sq();
                const double inner = std::log(R) + 0.5 * (r2 / (R * R) - 1.0);
                const double outer = 0.5 * std::log(r2);
                worst = std::max(worst, std::abs(inner - outer) / std::max(1.0, std::abs(outer)));
                const double ginner = 1.0 / (R * R), gouter = 1.0 / r2;
                worst = std::max(worst, std::abs(ginner - gouter) / gouter);
            }
        }
        checks.push_back(detail::check("continuity_at_R", worst <= 1e-14, {{"max_jump", worst}}));
    }
    {
        // Newton's theorem: the closed form equals the disc average of log.
        double worst = 0.0;
        auto rng = chunk_rng(opt.seed, 301, 0);
        std::uniform_real_distribution<double> frac(0.05, 2.5), ang(0.0, 2.0 * std::numbers::pi);
        for (double R : {0.1, 0.5, 1.0, 2.0}) {
            for (int k = 0; k < 4; ++k) {
                const double r = R * frac(rng), t = ang(rng);
                const Vec2 p{r * std::cos(t), r * std::sin(t)};
                worst = std::max(worst, std::abs(w_R(R, p) - disc_average_log(p, R)));
            }
        }
        checks.push_back(detail::check("disc_average_quadrature", worst <= 1e-9, {{"max_abs_error", worst}}));
    }
    {
        json constants = json::object();
        double worst_spread = 0.0, worst_quad = 0.0;
        for (double p : {3.0, 4.0, 8.0}) {
            double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
            for (double R : {0.025, 0.05, 0.1, 0.2, 0.4, 0.8, 1.6}) {
                const double c = lp_norm_grad_w(R, p) * std::pow(R, 1.0 - 2.0 / p);
                lo = std::min(lo, c);
                hi = std::max(hi, c);
                const double q = lp_norm_grad_w_quadrature(R, p);
                worst_quad = std::max(worst_quad, std::abs(q - lp_norm_grad_w(R, p)) / q);
            }
            worst_spread = std::max(worst_spread, (hi - lo) / lo);
            constants[std::to_string(static_cast<int>(p))] = lo;
        }
        checks.push_back(detail::check("lp_scaling_constant", worst_spread <= 1e-8,
                                       {{"C_p", constants}, {"max_relative_spread", worst_spread}}));
        checks.push_back(detail::check("lp_quadrature", worst_quad <= 1e-8, {{"max_relative_error", worst_quad}}));
    }
    {
        const double e1 = eta0(1.0), e2 = eta0(2.0), einf = eta0(1e9);
        const bool ok = std::abs(e1 - 0.125) < 1e-15 && std::abs(e2 - 1.0 / 6.0) < 1e-15 &&
                        std::abs(einf - 0.25) < 1e-9 && alpha_of(1.0, 2) == 1.0 && alpha_of(3.0, 4) == 1.0;
        checks.push_back(detail::check("eta0_alpha", ok, {{"eta0_1", e1}, {"eta0_2", e2}, {"eta0_1e9", einf}}));
    }
    return checks;
}

// ---------------------------------------------------------------- geometry

inline json triangle_case_outcome(const TriangleCase& c) {
    const SandwichReport s = verify_sandwich(c.t, c.R);
    const quad err = regime_identity_error(c.t.as<quad>(), quad(c.R));
    json o{{"regime", to_string(classify(c.t, c.R))},
           {"cyclic_sum", s.cyclic_sum},
           {"normalized_sum", s.scale > 0.0 ? s.cyclic_sum / s.scale : 0.0},
           {"lower_ok", s.lower_ok},
           {"upper_ratio", s.upper_ratio},
           {"identity_error", static_cast<double>(err)}};
    const auto e = c.t.edge_sq();
    if (e[0] > 0.0 && e[1] > 0.0 && e[2] > 0.0) {
        const CircumradiusReport cr = circumradius_bounds(c.t);
        o["circumradius_bound_ok"] = cr.bound_ok;
        o["max_edge_ok"] = cr.max_edge_ok;
    }
    return o;
}

inline json triangle_case_json(const TriangleCase& c) {
    json j = detail::triangle_json(c.t);
    j["kind"] = "triangle";
    j["R"] = c.R;
    return j;
}

inline json probe_case_outcome(const Triangle<double>& t, const std::string& profile, double R) {
    double scale = 0.0;
    const double s = profile == "gaussian_growth" ? profile_cyclic_sum(t, gaussian_growth_profile(), &scale)
                                                  : profile_cyclic_sum(t, regularized_norm(R), &scale);
    return json{{"cyclic_sum", s}, {"normalized_sum", s / scale}, {"violation", s < -1e-12 * scale}};
}

inline json run_geometry(const VerifyOptions& opt) {
    const std::uint64_t samples = opt.samples ? opt.samples : default_samples(Suite::geometry);
    json checks = json::array();
    for (Regime r : all_regimes) {
        const RegimeReport rep = geometry_suite(r, samples, opt.seed, opt.threads);
        const std::string name = to_string(r);
        {
            json ch = detail::check("lower_bound_" + name, rep.lower_violations == 0,
                                    {{"samples", rep.samples},
                                     {"violations", rep.lower_violations},
                                     {"min_normalized_sum", rep.min_normalized_sum}});
            ch["worst"] = json{{"inputs", triangle_case_json(rep.worst_lower)},
                               {"outcome", triangle_case_outcome(rep.worst_lower)}};
            checks.push_back(ch);
        }
        {
            json ch = detail::check("identity_" + name, rep.max_identity_error <= 1e-10,
                                    {{"checked", rep.identity_checked},
                                     {"collinear_skipped", rep.collinear},
                                     {"max_relative_error", rep.max_identity_error}});
            ch["worst"] = json{{"inputs", triangle_case_json(rep.worst_identity)},
                               {"outcome", triangle_case_outcome(rep.worst_identity)}};
            checks.push_back(ch);
        }
        {
            // All-long and all-short triangles obey S rho^2 <= 9/2; the mixed
            // regimes are only covered by the proof's envelope 4 * 6 = 24.
            const bool tight = r == Regime::all_long || r == Regime::all_short;
            const double bound = tight ? 4.5 + 1e-9 : 24.0;
            json ch = detail::check("upper_ratio_" + name, rep.max_upper_ratio <= bound,
                                    {{"measured_C", rep.max_upper_ratio}, {"bound", bound}});
            ch["worst"] = json{{"inputs", triangle_case_json(rep.worst_upper)},
                               {"outcome", triangle_case_outcome(rep.worst_upper)}};
            checks.push_back(ch);
        }
        checks.push_back(detail::check("circumradius_" + name,
                                       rep.circumradius_violations == 0 && rep.max_edge_violations == 0,
                                       {{"inverse_square_bound_violations", rep.circumradius_violations},
                                        {"max_edge_violations", rep.max_edge_violations}}));
    }
    {
        const Triangle<double> eq{{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}};
        const Triangle<double> small{{0.0, 0.0}, {0.1, 0.0}, {0.05, 0.1 * std::sqrt(3.0) / 2.0}};
        const Triangle<double> right{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
        const double s1 = cyclic_sum(eq, 0.1), s2 = cyclic_sum(small, 1.0);
        const CircumradiusReport c1 = circumradius_bounds(eq), c2 = circumradius_bounds(right);
        const bool ok = std::abs(s1 - 1.5) < 1e-12 && std::abs(s2 - 0.015) < 1e-14 &&
                        std::abs(c1.inv_circumradius_sq - 3.0) < 1e-12 && c1.bound_ok &&
                        std::abs(c2.inv_circumradius_sq - 2.0) < 1e-12 && std::abs(c2.nine_over_rho_sq - 2.25) < 1e-12;
        checks.push_back(detail::check("closed_form_examples", ok,
                                       {{"equilateral_side1_R0.1", s1},
                                        {"equilateral_side0.1_R1", s2},
                                        {"equilateral_inv_circumradius_sq", c1.inv_circumradius_sq},
                                        {"right_isoceles_inv_circumradius_sq", c2.inv_circumradius_sq}}));
    }
    for (const std::string profile : {"regularized_norm", "gaussian_growth"}) {
        const double R = 0.3;
        const ProbeReport p = profile == "gaussian_growth"
                                  ? counterexample_probe(gaussian_growth_profile(), samples, opt.seed, opt.threads)
                                  : counterexample_probe(regularized_norm(R), samples, opt.seed, opt.threads);
        const bool expect_violation = profile == "gaussian_growth";
        const bool ok = expect_violation ? p.violations > 0 : p.violations == 0;
        json ch = detail::check("probe_" + profile, ok,
                                {{"samples", p.samples},
                                 {"violations", p.violations},
                                 {"min_normalized_sum", p.min_normalized_sum}});
        if (p.samples > 0) {
            json in = detail::triangle_json(p.worst);
            in["kind"] = "probe";
            in["profile"] = profile;
            in["R"] = R;
            ch["worst"] = json{{"inputs", in}, {"outcome", probe_case_outcome(p.worst, profile, R)}};
        }
        checks.push_back(ch);
    }
    return checks;
}

// ------------------------------------------------- functional inequalities

struct StateCase {
    std::uint64_t seed = 0;
    std::uint64_t index = 0;
    std::size_t n = 64;
    double box = 6.0;
    double beta = 0.0;
    double R = 0.0;
    bool phased = true;
};

inline json state_case_json(const StateCase& c) {
    return json{{"kind", "state"}, {"seed", c.seed}, {"index", c.index}, {"n", c.n},     {"box", c.box},
                {"beta", c.beta},  {"R", c.R},       {"phased", c.phased}};
}

inline StateCase state_case_from(const json& j) {
    return StateCase{j.at("seed").get<std::uint64_t>(), j.at("index").get<std::uint64_t>(),
                     j.at("n").get<std::size_t>(),      j.at("box").get<double>(),
                     j.at("beta").get<double>(),        j.at("R").get<double>(),
                     j.at("phased").get<bool>()};
}

inline WaveFunction state_of(const StateCase& c) {
    return random_smooth_state(GridSpec(c.n, c.box), c.seed, c.index, RandomStateOptions{1.0, c.phased, 3});
}

// Diamagnetic and density lower bounds for one state.
inline json state_case_outcome(const StateCase& c) {
    const WaveFunction u = state_of(c);
    const AverageFieldFunctional F(u.grid(), FunctionalParams{c.beta, c.R, TrapPotential::harmonic()});
    const EnergyBreakdown e = F.energy(u);
    const double mk = F.modulus_kinetic(u.field());
    const double magnetic = e.magnetic_kinetic();
    json o{{"magnetic_kinetic", magnetic}, {"modulus_kinetic", mk}, {"diamagnetic_margin", magnetic - mk}};
    const double lower = F.magnetic_lower_bound(u.field());
    o["curl_lower_bound"] = lower;
    if (c.R == 0.0) {
        double r2 = 0.0;
        const RealField rho = density(u);
        for (double v : rho.values) r2 += v * v;
        const double bound = 2.0 * std::numbers::pi * std::abs(c.beta) * r2 * u.grid().cell_weight();
        o["density_bound"] = bound;
        o["density_margin"] = (magnetic - bound) / std::max(1.0, magnetic);
        // int rho |A[rho]|^2 against (3/2) ||u||^4 int |grad |u||^2
        const double q = c.beta != 0.0 ? e.quartic / (c.beta * c.beta) : 0.0;
        o["magnetic_term"] = q;
        o["magnetic_term_ratio"] = q / (u.mass() * u.mass() * mk);
    }
    return o;
}

// Radial test densities with exact samplers.
enum class RadialDensity { gaussian_wide, gaussian_narrow, ring };

inline std::string to_string(RadialDensity d) {
    switch (d) {
    case RadialDensity::gaussian_wide: return "gaussian_width_1";
    case RadialDensity::gaussian_narrow: return "gaussian_width_0.6";
    case RadialDensity::ring: return "r2_gaussian";
    }
    return "unknown";
}

inline double radial_density(RadialDensity d, double r2) {
    switch (d) {
    case RadialDensity::gaussian_wide: return std::exp(-r2) / std::numbers::pi;
    case RadialDensity::gaussian_narrow: return std::exp(-r2 / 0.36) / (std::numbers::pi * 0.36);
    case RadialDensity::ring: return r2 * std::exp(-r2) / std::numbers::pi;
    }
    return 0.0;
}

inline Point<double> sample_radial(RadialDensity d, std::mt19937_64& rng) {
    if (d == RadialDensity::ring) {
        std::gamma_distribution<double> g(2.0, 1.0); // r^2 ~ Gamma(2, 1)
        std::uniform_real_distribution<double> a(0.0, 2.0 * std::numbers::pi);
        const double r = std::sqrt(g(rng)), t = a(rng);
        return {r * std::cos(t), r * std::sin(t)};
    }
    const double sd = (d == RadialDensity::gaussian_wide ? 1.0 : 0.6) / std::numbers::sqrt2;
    std::normal_distribution<double> nd(0.0, sd);
    const double x = nd(rng);
    return {x, nd(rng)};
}

struct MonteCarloEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
};

// int rho |A[rho]|^2 = (1/6) E[circumradius^-2] for three iid points ~ rho.
inline MonteCarloEstimate magnetic_term_monte_carlo(RadialDensity d, std::uint64_t samples, std::uint64_t seed,
                                                    unsigned threads = thread_count()) {
    struct Acc {
        double sum = 0.0, sum2 = 0.0;
        std::uint64_t count = 0;
    };
    const auto tag = 400 + static_cast<std::uint64_t>(d);
    auto chunks = run_chunks<Acc>(
        samples,
        [&](std::uint64_t chunk, std::uint64_t b, std::uint64_t e) {
            Acc a;
            auto rng = chunk_rng(seed, tag, chunk);
            for (std::uint64_t k = b; k < e; ++k) {
                const Point<double> x = sample_radial(d, rng), y = sample_radial(d, rng);
                const Triangle<double> t{x, y, sample_radial(d, rng)};
                const double v = t.inv_circumradius_sq() / 6.0;
                a.sum += v;
                a.sum2 += v * v;
                ++a.count;
            }
            return a;
        },
        threads);
    Acc total;
    for (const Acc& a : chunks) {
        total.sum += a.sum;
        total.sum2 += a.sum2;
        total.count += a.count;
    }
    const double m = total.sum / static_cast<double>(total.count);
    const double var = total.sum2 / static_cast<double>(total.count) - m * m;
    return {m, std::sqrt(var / static_cast<double>(total.count))};
}

// Grid value of int rho |A[rho]|^2 for a radial density.
inline double magnetic_term_grid(RadialDensity d, const GridSpec& g) {
    auto f = ScalarField::sample(g, [&](double x, double y) { return cplx(std::sqrt(radial_density(d, x * x + y * y)), 0.0); });
    const WaveFunction u = WaveFunction(std::move(f)).normalized();
    const AverageFieldFunctional F(g, FunctionalParams{1.0, 0.0, TrapPotential::harmonic()});
    return F.energy(u).quartic;
}

inline json run_functional_inequalities(const VerifyOptions& opt) {
    const std::uint64_t samples = opt.samples ? opt.samples : default_samples(Suite::functional_inequalities);
    json checks = json::array();
    const std::vector<double> betas{0.5, -0.5, 2.0, -2.0};
    const std::vector<double> radii{0.0, 0.1};

    double worst_dia = std::numeric_limits<double>::infinity(), worst_den = worst_dia;
    double worst_curl = worst_dia, worst_ratio = 0.0;
    StateCase dia_case, den_case, curl_case, ratio_case;
    std::uint64_t cases = 0;
    for (double R : radii) {
        for (double beta : betas) {
            const AverageFieldFunctional F(GridSpec(opt.grid_n, opt.box), FunctionalParams{beta, R, TrapPotential::harmonic()});
            for (std::uint64_t i = 0; i < samples; ++i) {
                const StateCase c{opt.seed, i, opt.grid_n, opt.box, beta, R, true};
                const WaveFunction u = state_of(c);
                const EnergyBreakdown e = F.energy(u);
                const double mk = F.modulus_kinetic(u.field());
                const double magnetic = e.magnetic_kinetic();
                ++cases;
                if (magnetic - mk < worst_dia) {
                    worst_dia = magnetic - mk;
                    dia_case = c;
                }
                const double lower = F.magnetic_lower_bound(u.field());
                const double curl_margin = (magnetic - lower) / std::max(1.0, magnetic);
                if (curl_margin < worst_curl) {
                    worst_curl = curl_margin;
                    curl_case = c;
                }
                if (R == 0.0) {
                    const RealField rho = density(u);
                    double r2 = 0.0;
                    for (double v : rho.values) r2 += v * v;
                    const double bound = 2.0 * std::numbers::pi * std::abs(beta) * r2 * u.grid().cell_weight();
                    const double margin = (magnetic - bound) / std::max(1.0, magnetic);
                    if (margin < worst_den) {
                        worst_den = margin;
                        den_case = c;
                    }
                    const double ratio = e.quartic / (beta * beta) / (u.mass() * u.mass() * mk);
                    if (ratio > worst_ratio) {
                        worst_ratio = ratio;
                        ratio_case = c;
                    }
                }
            }
        }
    }
    auto with_worst = [](json ch, const StateCase& c) {
        ch["worst"] = json{{"inputs", state_case_json(c)}, {"outcome", state_case_outcome(c)}};
        return ch;
    };
    checks.push_back(with_worst(
        detail::check("diamagnetic", worst_dia >= -1e-8, {{"cases", cases}, {"min_margin", worst_dia}}), dia_case));
    checks.push_back(with_worst(detail::check("density_lower_bound", worst_den >= -1e-6,
                                              {{"cases", samples * betas.size()}, {"min_relative_margin", worst_den}}),
                                den_case));
    checks.push_back(with_worst(detail::check("curl_lower_bound", worst_curl >= -1e-6,
                                              {{"cases", cases}, {"min_relative_margin", worst_curl}}),
                                curl_case));
    checks.push_back(with_worst(detail::check("magnetic_term_bound", worst_ratio <= 1.5,
                                              {{"states", samples}, {"max_ratio", worst_ratio}, {"bound", 1.5}}),
                                ratio_case));
    {
        // Monte Carlo triple integral against the FFT path on a fine grid.
        const GridSpec fine(256, 6.0);
        json per = json::object();
        bool ok = true;
        for (RadialDensity d : {RadialDensity::gaussian_wide, RadialDensity::gaussian_narrow, RadialDensity::ring}) {
            const MonteCarloEstimate mc = magnetic_term_monte_carlo(d, opt.mc_samples, opt.seed, opt.threads);
            const double grid = magnetic_term_grid(d, fine);
            const double z = (grid - mc.mean) / mc.standard_error;
            ok = ok && std::abs(z) <= 3.0;
            per[to_string(d)] = json{{"grid", grid}, {"monte_carlo", mc.mean}, {"standard_error", mc.standard_error},
                                     {"z", z}};
        }
        checks.push_back(detail::check("magnetic_term_monte_carlo", ok,
                                       {{"samples", opt.mc_samples}, {"densities", per}}));
    }
    return checks;
}

// ------------------------------------------------------ many-body identities

struct MixedCase {
    std::uint64_t seed = 0;
    std::uint64_t index = 0;
    std::size_t n = 64;
    double box = 6.0;
    double R = 0.1;
};

inline json mixed_case_json(const MixedCase& c) {
    return json{{"kind", "mixed"}, {"seed", c.seed}, {"index", c.index}, {"n", c.n}, {"box", c.box}, {"R", c.R}};
}

inline json mixed_case_outcome(const MixedCase& c) {
    const WaveFunction u = random_smooth_state(GridSpec(c.n, c.box), c.seed, c.index);
    const MixedTermCrosscheck m = mixed_term_crosscheck(u, c.R);
    return json{{"direct", m.direct}, {"fft", m.fft},
                {"relative_difference", std::abs(m.direct - m.fft) / std::max(std::abs(m.fft), 1e-300)}};
}

inline json run_manybody_identities(const VerifyOptions& opt) {
    const std::uint64_t samples = opt.samples ? opt.samples : default_samples(Suite::manybody_identities);
    json checks = json::array();
    const GridSpec g(opt.grid_n, opt.box);
    const double R = 0.1;

    double worst_rel = 0.0;
    MixedCase worst_case;
    bool flip_ok = true, real_zero_ok = true, coeff_ok = true, gap_ok = true, parity_ok = true, n2_ok = true;
    double worst_coeff = 0.0, worst_real = 0.0, min_gap = std::numeric_limits<double>::infinity();
    for (std::uint64_t i = 0; i < samples; ++i) {
        const MixedCase c{opt.seed, i, opt.grid_n, opt.box, R};
        const WaveFunction u = random_smooth_state(g, c.seed, c.index);
        const MixedTermCrosscheck m = mixed_term_crosscheck(u, R);
        const double rel = std::abs(m.direct - m.fft) / std::max(std::abs(m.fft), 1e-300);
        if (rel > worst_rel) {
            worst_rel = rel;
            worst_case = c;
        }
        if (i < 3) {
            const MixedTermCrosscheck mc = mixed_term_crosscheck(u.conjugated(), R);
            flip_ok = flip_ok && std::abs(mc.direct + m.direct) <= 1e-12 * std::abs(m.direct) + 1e-15 &&
                      std::abs(mc.fft + m.fft) <= 1e-12 * std::abs(m.fft) + 1e-15;
            const WaveFunction real = random_smooth_state(g, c.seed, c.index, RandomStateOptions{1.0, false, 3});
            const MixedTermCrosscheck mr = mixed_term_crosscheck(real, R);
            worst_real = std::max({worst_real, std::abs(mr.direct), std::abs(mr.fft)});
            real_zero_ok = real_zero_ok && std::abs(mr.direct) <= 1e-12 && std::abs(mr.fft) <= 1e-12;
            const ProductStateEvaluator ev_real(real, R);
            for (long N : {2L, 10L, 1000L})
                parity_ok = parity_ok && ev_real.evaluate(N, 1.3).per_particle_total ==
                                             ev_real.evaluate(N, -1.3).per_particle_total;
        }
        const ProductStateEvaluator ev(u, R);
        for (long N : {2L, 3L, 10L, 100L, 10000L}) {
            const double beta = 0.7;
            const ManyBodyBreakdown b = ev.evaluate(N, beta);
            const double Nm1 = static_cast<double>(N - 1);
            const double c3 = b.three_body / (beta * beta * ev.three_body_integral());
            const double c2 = b.singular / (beta * beta * ev.pair_integral());
            const double err = std::max(std::abs(c3 - static_cast<double>(N - 2) / Nm1), std::abs(c2 - 1.0 / Nm1));
            worst_coeff = std::max(worst_coeff, err);
            coeff_ok = coeff_ok && err <= 4 * std::numeric_limits<double>::epsilon();
            if (N == 2) n2_ok = n2_ok && b.three_body == 0.0;
            const double gap = b.per_particle_total - ev.average_field_energy(beta);
            min_gap = std::min(min_gap, gap);
            gap_ok = gap_ok && gap >= -1e-10;
        }
    }
    {
        json ch = detail::check("mixed_term_crosscheck", worst_rel <= 1e-8,
                                {{"states", samples}, {"max_relative_difference", worst_rel}, {"R", R}});
        ch["worst"] = json{{"inputs", mixed_case_json(worst_case)}, {"outcome", mixed_case_outcome(worst_case)}};
        checks.push_back(ch);
    }
    checks.push_back(detail::check("mixed_term_conjugation_flips_sign", flip_ok));
    checks.push_back(detail::check("mixed_term_real_state_zero", real_zero_ok, {{"max_abs", worst_real}}));
    checks.push_back(detail::check("coefficient_exactness", coeff_ok, {{"max_error", worst_coeff}}));
    checks.push_back(detail::check("two_particles_no_three_body", n2_ok));
    checks.push_back(detail::check("beta_parity_real_state", parity_ok));
    checks.push_back(detail::check("product_gap_nonnegative", gap_ok, {{"min_gap", min_gap}}));
    {
        // Pair integral grows as R shrinks (radial density); reported, never failed.
        auto f = ScalarField::sample(g, [](double x, double y) { return cplx(std::exp(-0.5 * (x * x + y * y)), 0.0); });
        const WaveFunction u = WaveFunction(std::move(f)).normalized();
        json values = json::array();
        bool monotone = true;
        double prev = 0.0;
        for (double r : {0.8, 0.4, 0.2, 0.1}) {
            const double s = ProductStateEvaluator(u, r).pair_integral();
            if (!values.empty() && s < prev) monotone = false;
            values.push_back(json{{"R", r}, {"pair_integral", s}});
            prev = s;
        }
        json ch = detail::check("pair_integral_monotone_in_R", true, {{"values", values}, {"monotone", monotone}});
        ch["flagged"] = !monotone;
        checks.push_back(ch);
    }
    return checks;
}

// ------------------------------------------------------------- front end

inline json verify_config_json(Suite suite, const VerifyOptions& opt) {
    return json{{"suite", to_string(suite)},
                {"seed", opt.seed},
                {"samples", opt.samples ? opt.samples : default_samples(suite)},
                {"grid_n", opt.grid_n},
                {"box", opt.box},
                {"mc_samples", opt.mc_samples}};
}

inline json run_suite(Suite suite, const VerifyOptions& opt) {
    json checks;
    switch (suite) {
    case Suite::kernels: checks = run_kernels(opt); break;
    case Suite::geometry: checks = run_geometry(opt); break;
    case Suite::functional_inequalities: checks = run_functional_inequalities(opt); break;
    case Suite::manybody_identities: checks = run_manybody_identities(opt); break;
    }
    bool pass = true;
    for (const json& c : checks) pass = pass && c.at("pass").get<bool>();
    return json{{"version", version_string}, {"config", verify_config_json(suite, opt)}, {"checks", checks},
                {"pass", pass}};
}

// Re-evaluates the stored worst case of every check.
inline json replay_inputs(const json& in) {
    const std::string kind = in.at("kind").get<std::string>();
    if (kind == "triangle") return triangle_case_outcome({detail::triangle_from(in), in.at("R").get<double>()});
    if (kind == "probe")
        return probe_case_outcome(detail::triangle_from(in), in.at("profile").get<std::string>(),
                                  in.at("R").get<double>());
    if (kind == "state") return state_case_outcome(state_case_from(in));
    if (kind == "mixed")
        return mixed_case_outcome(MixedCase{in.at("seed").get<std::uint64_t>(), in.at("index").get<std::uint64_t>(),
                                            in.at("n").get<std::size_t>(), in.at("box").get<double>(),
                                            in.at("R").get<double>()});
    if (kind == "kernel_point")
        return kernel_case_outcome(KernelCase{{in.at("p").at(0).get<double>(), in.at("p").at(1).get<double>()},
                                              in.at("R").get<double>()});
    throw FormatError("replay: unknown case kind '" + kind + "'");
}

inline json replay_report(const json& report) {
    if (!report.contains("checks") || !report.at("checks").is_array()) throw FormatError("replay: no checks in report");
    json out = json::array();
    bool identical = true;
    for (const json& c : report.at("checks")) {
        if (!c.contains("worst")) continue;
        const json outcome = replay_inputs(c.at("worst").at("inputs"));
        const bool same = outcome == c.at("worst").at("outcome");
        identical = identical && same;
        out.push_back(json{{"name", c.at("name")}, {"outcome", outcome}, {"identical", same}});
    }
    return json{{"version", version_string}, {"replayed", out}, {"identical", identical}};
}

} // namespace afa
