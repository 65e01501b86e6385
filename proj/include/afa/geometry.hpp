// geometry.hpp - triangle-level checks of the regularized three-body cyclic sum
//
//   S_R(x, y, z) = sum_cyc (x - y) . (x - z) / (|x - y|_R^2 |x - z|_R^2),
//   |v|_R = max(|v|, R).
//
// Multiplying by the three regularized squared edges gives the numerator
//   |y-z|_R^2 (x-y).(x-z) + |z-x|_R^2 (y-z).(y-x) + |x-y|_R^2 (z-x).(z-y),
// which has a closed form in every edge-length regime:
//   all long     S = 1 / (2 circumradius^2)
//   all short    S = rho^2 / (2 R^4)
//   two short    num = |x-z|^2 (R^2 + (y-z).(y-x))        (x-y, y-z short)
//   one short    num = (R^2 - |x-y|^2)(z-x).(z-y) + 2 B^2  (x-y short), B = (z-x) ^ (z-y)
// Everything is templated on the scalar so the identities can be checked in
// quad precision, where near-collinear cancellation is harmless.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "afa/error.hpp"
#include "afa/kernels.hpp"
#include "afa/parallel.hpp"

namespace afa {

using quad = __float128;

template <class Real>
Real abs_of(Real v) {
    return v < Real(0) ? -v : v;
}

template <class Real = double>
struct Point {
    Real x{};
    Real y{};
    friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend bool operator==(Point, Point) = default;
};

template <class Real>
Real dot(Point<Real> a, Point<Real> b) {
    return a.x * b.x + a.y * b.y;
}

template <class Real>
Real cross(Point<Real> a, Point<Real> b) {
    return a.x * b.y - a.y * b.x;
}

template <class Real = double>
struct Triangle {
    Point<Real> x, y, z;

    template <class Other>
    Triangle<Other> as() const {
        auto c = [](Point<Real> p) { return Point<Other>{static_cast<Other>(p.x), static_cast<Other>(p.y)}; };
        return {c(x), c(y), c(z)};
    }

    // |x-y|^2, |y-z|^2, |z-x|^2
    std::array<Real, 3> edge_sq() const { return {dot(x - y, x - y), dot(y - z, y - z), dot(z - x, z - x)}; }
    Real rho_sq() const {
        const auto e = edge_sq();
        return e[0] + e[1] + e[2];
    }
    // Twice the signed area.
    Real twice_area() const { return cross(y - x, z - x); }
    // 1 / circumradius^2 = 4 (2 area)^2 / (a^2 b^2 c^2); zero for collinear points.
    Real inv_circumradius_sq() const {
        const auto e = edge_sq();
        const Real den = e[0] * e[1] * e[2];
        if (den == Real(0)) throw DomainError("circumradius undefined: coincident vertices");
        const Real a = twice_area();
        return Real(4) * a * a / den;
    }
    bool collinear() const { return twice_area() == Real(0); }
};

namespace detail {

template <class Real>
Real reg_sq(Real e2, Real R2) {
    return e2 > R2 ? e2 : R2;
}

template <class Real>
void require_distinct(const Triangle<Real>& t, Real R) {
    if (R == Real(0) && (t.x == t.y || t.y == t.z || t.z == t.x))
        throw DomainError("cyclic sum at R = 0 needs three distinct points");
}

} // namespace detail

// The three cyclic terms; their sum is S_R.
template <class Real>
std::array<Real, 3> cyclic_terms(const Triangle<Real>& t, Real R) {
    if (!(R >= Real(0))) throw DomainError("cyclic sum needs R >= 0");
    detail::require_distinct(t, R);
    const Real R2 = R * R;
    const auto e = t.edge_sq();
    const Real xy = detail::reg_sq(e[0], R2), yz = detail::reg_sq(e[1], R2), zx = detail::reg_sq(e[2], R2);
    return {dot(t.x - t.y, t.x - t.z) / (xy * zx), dot(t.y - t.z, t.y - t.x) / (yz * xy),
            dot(t.z - t.x, t.z - t.y) / (zx * yz)};
}

template <class Real>
Real cyclic_sum(const Triangle<Real>& t, Real R) {
    const auto c = cyclic_terms(t, R);
    return c[0] + c[1] + c[2];
}

// Sum multiplied through by the three regularized squared edges.
template <class Real>
Real cyclic_numerator(const Triangle<Real>& t, Real R) {
    const Real R2 = R * R;
    const auto e = t.edge_sq();
    const Real xy = detail::reg_sq(e[0], R2), yz = detail::reg_sq(e[1], R2), zx = detail::reg_sq(e[2], R2);
    return yz * dot(t.x - t.y, t.x - t.z) + zx * dot(t.y - t.z, t.y - t.x) + xy * dot(t.z - t.x, t.z - t.y);
}

enum class Regime { all_long, one_short, two_short, all_short, uniform };

inline std::string to_string(Regime r) {
    switch (r) {
    case Regime::all_long: return "all_long";
    case Regime::one_short: return "one_short";
    case Regime::two_short: return "two_short";
    case Regime::all_short: return "all_short";
    case Regime::uniform: return "uniform";
    }
    return "unknown";
}

inline constexpr std::array<Regime, 5> all_regimes{Regime::all_long, Regime::one_short, Regime::two_short,
                                                   Regime::all_short, Regime::uniform};

// Edge-length regime of a triangle; an edge is short when |e| <= R.
template <class Real>
Regime classify(const Triangle<Real>& t, Real R) {
    const auto e = t.edge_sq();
    const Real R2 = R * R;
    const int s = int(e[0] <= R2) + int(e[1] <= R2) + int(e[2] <= R2);
    switch (s) {
    case 0: return Regime::all_long;
    case 1: return Regime::one_short;
    case 2: return Regime::two_short;
    default: return Regime::all_short;
    }
}

// Relabels the vertices so that the regime formula applies in its stated form:
// one short -> x-y short; two short -> x-y and y-z short.
template <class Real>
Triangle<Real> canonical_labels(const Triangle<Real>& t, Real R) {
    const Real R2 = R * R;
    const std::array<Triangle<Real>, 3> rot{t, Triangle<Real>{t.y, t.z, t.x}, Triangle<Real>{t.z, t.x, t.y}};
    const Regime r = classify(t, R);
    for (const auto& c : rot) {
        const auto e = c.edge_sq();
        if (r == Regime::one_short && e[0] <= R2) return c;
        if (r == Regime::two_short && e[0] <= R2 && e[1] <= R2) return c;
    }
    return t;
}

// Closed form of the numerator (or of S itself in the all-long / all-short
// regimes) compared with the direct evaluation, as a relative error.
// Returns a negative value when the regime formula is undefined (collinear
// all-long triangles, where the circumradius is infinite).
template <class Real>
Real regime_identity_error(const Triangle<Real>& t, Real R) {
    const Real R2 = R * R;
    switch (classify(t, R)) {
    case Regime::all_long: {
        if (t.collinear()) return Real(-1);
        const Real s = cyclic_sum(t, R);
        return abs_of(s * Real(2) / t.inv_circumradius_sq() - Real(1));
    }
    case Regime::all_short: {
        const Real rho2 = t.rho_sq();
        if (rho2 == Real(0)) return Real(0);
        const Real s = cyclic_sum(t, R);
        return abs_of(s * Real(2) * R2 * R2 / rho2 - Real(1));
    }
    case Regime::two_short: {
        const Triangle<Real> c = canonical_labels(t, R);
        const Real xz2 = dot(c.x - c.z, c.x - c.z);
        const Real closed = xz2 * (R2 + dot(c.y - c.z, c.y - c.x));
        const Real direct = cyclic_numerator(c, R);
        const Real scale = xz2 * R2 * Real(2);
        return abs_of(direct - closed) / scale;
    }
    case Regime::one_short: {
        const Triangle<Real> c = canonical_labels(t, R);
        const Real b = cross(c.z - c.x, c.z - c.y);
        const Real xy2 = dot(c.x - c.y, c.x - c.y);
        const Real closed = (R2 - xy2) * dot(c.z - c.x, c.z - c.y) + Real(2) * b * b;
        const Real direct = cyclic_numerator(c, R);
        const Real scale = Real(4) * R2 * dot(c.x - c.z, c.x - c.z);
        return abs_of(direct - closed) / scale;
    }
    default: return Real(0);
    }
}

struct SandwichReport {
    double cyclic_sum = 0.0;
    double scale = 0.0; // sum of |terms|
    bool lower_ok = true;
    double upper_ratio = 0.0; // cyclic_sum * rho^2
};

inline SandwichReport verify_sandwich(const Triangle<double>& t, double R) {
    const auto c = cyclic_terms(t, R);
    SandwichReport r;
    r.cyclic_sum = c[0] + c[1] + c[2];
    r.scale = std::abs(c[0]) + std::abs(c[1]) + std::abs(c[2]);
    r.lower_ok = r.cyclic_sum >= -1e-12 * r.scale;
    r.upper_ratio = r.cyclic_sum * t.rho_sq();
    return r;
}

struct CircumradiusReport {
    bool collinear = false;
    double inv_circumradius_sq = 0.0;
    double nine_over_rho_sq = 0.0;
    bool bound_ok = true;    // R^-2 <= 9 rho^-2
    bool max_edge_ok = true; // R >= max edge / 2
};

// Evaluated in quad precision; the equilateral triangle is the equality case of
// the first bound, so both comparisons allow a relative 1e-12.
inline CircumradiusReport circumradius_bounds(const Triangle<double>& t) {
    const Triangle<quad> q = t.as<quad>();
    const quad rho2 = q.rho_sq();
    if (rho2 == 0) throw DomainError("circumradius bounds: degenerate triangle");
    CircumradiusReport r;
    r.collinear = q.collinear();
    const auto e = q.edge_sq();
    if (e[0] == 0 || e[1] == 0 || e[2] == 0) {
        r.collinear = true;
        r.nine_over_rho_sq = static_cast<double>(quad(9) / rho2);
        return r;
    }
    const quad inv = q.inv_circumradius_sq();
    r.inv_circumradius_sq = static_cast<double>(inv);
    r.nine_over_rho_sq = static_cast<double>(quad(9) / rho2);
    r.bound_ok = inv * rho2 <= quad(9) * (quad(1) + quad(1e-12));
    const quad emax = std::max({e[0], e[1], e[2]});
    r.max_edge_ok = inv * emax <= quad(4) * (quad(1) + quad(1e-12));
    return r;
}

// A triangle with its regularization radius, replayable from a report.
struct TriangleCase {
    Triangle<double> t;
    double R = 0.0;
};

namespace detail {

inline Point<double> uniform_in_disc(std::mt19937_64& rng, Point<double> c, double radius) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = radius * std::sqrt(u(rng));
    const double a = 2.0 * std::numbers::pi * u(rng);
    return {c.x + r * std::cos(a), c.y + r * std::sin(a)};
}

inline Point<double> uniform_in_box(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const double x = u(rng);
    return {x, u(rng)};
}

inline double edge(Point<double> a, Point<double> b) { return std::sqrt(dot(a - b, a - b)); }

inline Triangle<double> shuffled(std::mt19937_64& rng, Point<double> a, Point<double> b, Point<double> c) {
    std::array<Point<double>, 3> p{a, b, c};
    std::shuffle(p.begin(), p.end(), rng);
    return {p[0], p[1], p[2]};
}

} // namespace detail

// Random triangle in the requested regime. Vertices live in [-2, 2]^2 (the
// short-edge generators place them around a vertex drawn there); R is uniform
// in [0.05, 1] for the targeted regimes and in [0.01, 2] for the uniform one.
inline TriangleCase sample_triangle(Regime regime, std::mt19937_64& rng) {
    using detail::edge;
    std::uniform_real_distribution<double> rdist(0.05, 1.0);
    switch (regime) {
    case Regime::uniform: {
        std::uniform_real_distribution<double> wide(0.01, 2.0);
        const double R = wide(rng);
        const Point<double> a = detail::uniform_in_box(rng);
        const Point<double> b = detail::uniform_in_box(rng);
        return {{a, b, detail::uniform_in_box(rng)}, R};
    }
    case Regime::all_long: {
        const double R = rdist(rng);
        for (;;) {
            const Point<double> a = detail::uniform_in_box(rng), b = detail::uniform_in_box(rng),
                                c = detail::uniform_in_box(rng);
            if (edge(a, b) > R && edge(b, c) > R && edge(c, a) > R) return {{a, b, c}, R};
        }
    }
    case Regime::all_short: {
        const double R = rdist(rng);
        const Point<double> c = detail::uniform_in_box(rng);
        const Point<double> a = detail::uniform_in_disc(rng, c, 0.5 * R);
        const Point<double> b = detail::uniform_in_disc(rng, c, 0.5 * R);
        return {{a, b, detail::uniform_in_disc(rng, c, 0.5 * R)}, R};
    }
    case Regime::two_short: {
        const double R = rdist(rng);
        const Point<double> m = detail::uniform_in_box(rng);
        for (;;) {
            const Point<double> a = detail::uniform_in_disc(rng, m, R), b = detail::uniform_in_disc(rng, m, R);
            if (edge(a, b) > R && edge(a, m) <= R && edge(b, m) <= R) return {detail::shuffled(rng, a, m, b), R};
        }
    }
    case Regime::one_short: {
        const double R = rdist(rng);
        const Point<double> a = detail::uniform_in_box(rng);
        const Point<double> b = detail::uniform_in_disc(rng, a, R);
        for (;;) {
            const Point<double> c = detail::uniform_in_box(rng);
            if (edge(c, a) > R && edge(c, b) > R) return {detail::shuffled(rng, a, b, c), R};
        }
    }
    }
    throw ConfigError("unknown regime");
}

struct RegimeReport {
    Regime regime = Regime::uniform;
    std::uint64_t seed = 0;
    std::uint64_t samples = 0;
    std::uint64_t lower_violations = 0;
    double min_normalized_sum = std::numeric_limits<double>::infinity(); // cyclic_sum / scale
    TriangleCase worst_lower{};
    double max_upper_ratio = 0.0;
    TriangleCase worst_upper{};
    std::uint64_t identity_checked = 0;
    std::uint64_t collinear = 0;
    double max_identity_error = 0.0;
    TriangleCase worst_identity{};
    std::uint64_t circumradius_violations = 0;
    std::uint64_t max_edge_violations = 0;
};

namespace detail {

inline void merge_into(RegimeReport& acc, const RegimeReport& r) {
    acc.samples += r.samples;
    acc.lower_violations += r.lower_violations;
    acc.identity_checked += r.identity_checked;
    acc.collinear += r.collinear;
    acc.circumradius_violations += r.circumradius_violations;
    acc.max_edge_violations += r.max_edge_violations;
    if (r.min_normalized_sum < acc.min_normalized_sum) {
        acc.min_normalized_sum = r.min_normalized_sum;
        acc.worst_lower = r.worst_lower;
    }
    if (r.max_upper_ratio > acc.max_upper_ratio) {
        acc.max_upper_ratio = r.max_upper_ratio;
        acc.worst_upper = r.worst_upper;
    }
    if (r.max_identity_error > acc.max_identity_error) {
        acc.max_identity_error = r.max_identity_error;
        acc.worst_identity = r.worst_identity;
    }
}

inline void check_case(RegimeReport& rep, const TriangleCase& c) {
    ++rep.samples;
    const SandwichReport s = verify_sandwich(c.t, c.R);
    if (!s.lower_ok) ++rep.lower_violations;
    const double normalized = s.scale > 0.0 ? s.cyclic_sum / s.scale : 0.0;
    if (normalized < rep.min_normalized_sum) {
        rep.min_normalized_sum = normalized;
        rep.worst_lower = c;
    }
    if (s.upper_ratio > rep.max_upper_ratio) {
        rep.max_upper_ratio = s.upper_ratio;
        rep.worst_upper = c;
    }
    const quad err = regime_identity_error(c.t.as<quad>(), quad(c.R));
    if (err < 0) {
        ++rep.collinear;
    } else {
        ++rep.identity_checked;
        const double e = static_cast<double>(err);
        if (e > rep.max_identity_error) {
            rep.max_identity_error = e;
            rep.worst_identity = c;
        }
    }
    const auto e = c.t.edge_sq();
    if (e[0] > 0.0 && e[1] > 0.0 && e[2] > 0.0) {
        const CircumradiusReport cr = circumradius_bounds(c.t);
        if (!cr.bound_ok) ++rep.circumradius_violations;
        if (!cr.max_edge_ok) ++rep.max_edge_violations;
    }
}

} // namespace detail

// Samples `samples` triangles of one regime and checks the sandwich bounds, the
// regime identity and the circumradius bounds on each.
inline RegimeReport geometry_suite(Regime regime, std::uint64_t samples, std::uint64_t seed,
                                   unsigned threads = thread_count()) {
    const auto tag = static_cast<std::uint64_t>(regime) + 1;
    auto chunks = run_chunks<RegimeReport>(
        samples,
        [&](std::uint64_t chunk, std::uint64_t b, std::uint64_t e) {
            RegimeReport rep;
            auto rng = chunk_rng(seed, tag, chunk);
            for (std::uint64_t k = b; k < e; ++k) detail::check_case(rep, sample_triangle(regime, rng));
            return rep;
        },
        threads);
    RegimeReport total;
    total.regime = regime;
    total.seed = seed;
    for (const auto& c : chunks) detail::merge_into(total, c);
    return total;
}

// Radial profile replacing |.|_R: the cyclic sum uses profile(v)^2 as the
// regularized squared edge.
using RadialProfile = std::function<double(Point<double>)>;

inline RadialProfile regularized_norm(double R) {
    return [R](Point<double> v) { return std::max(std::sqrt(dot(v, v)), R); };
}

inline RadialProfile gaussian_growth_profile() {
    return [](Point<double> v) { return std::exp(0.5 * dot(v, v)); };
}

template <class Profile>
double profile_cyclic_sum(const Triangle<double>& t, const Profile& p, double* scale = nullptr) {
    auto sq = [&](Point<double> v) {
        const double a = p(v);
        return a * a;
    };
    const double xy = sq(t.x - t.y), yz = sq(t.y - t.z), zx = sq(t.z - t.x);
    const double a = dot(t.x - t.y, t.x - t.z) / (xy * zx);
    const double b = dot(t.y - t.z, t.y - t.x) / (yz * xy);
    const double c = dot(t.z - t.x, t.z - t.y) / (zx * yz);
    if (scale) *scale = std::abs(a) + std::abs(b) + std::abs(c);
    return a + b + c;
}

struct ProbeReport {
    std::uint64_t seed = 0;
    std::uint64_t samples = 0;
    std::uint64_t violations = 0; // sum < -1e-12 * scale
    double min_normalized_sum = std::numeric_limits<double>::infinity();
    Triangle<double> worst{};
};

// Random triangles with vertices uniform in [-2, 2]^2.
inline ProbeReport counterexample_probe(const RadialProfile& profile, std::uint64_t samples, std::uint64_t seed,
                                        unsigned threads = thread_count()) {
    auto chunks = run_chunks<ProbeReport>(
        samples,
        [&](std::uint64_t chunk, std::uint64_t b, std::uint64_t e) {
            ProbeReport rep;
            auto rng = chunk_rng(seed, 100, chunk);
            for (std::uint64_t k = b; k < e; ++k) {
                const Point<double> p = detail::uniform_in_box(rng), q = detail::uniform_in_box(rng);
                const Triangle<double> t{p, q, detail::uniform_in_box(rng)};
                ++rep.samples;
                double scale = 0.0;
                const double s = profile_cyclic_sum(t, profile, &scale);
                if (!std::isfinite(s) || !(scale > 0.0)) continue;
                if (s < -1e-12 * scale) ++rep.violations;
                if (s / scale < rep.min_normalized_sum) {
                    rep.min_normalized_sum = s / scale;
                    rep.worst = t;
                }
            }
            return rep;
        },
        threads);
    ProbeReport total;
    total.seed = seed;
    for (const auto& c : chunks) {
        total.samples += c.samples;
        total.violations += c.violations;
        if (c.min_normalized_sum < total.min_normalized_sum) {
            total.min_normalized_sum = c.min_normalized_sum;
            total.worst = c.worst;
        }
    }
    return total;
}

} // namespace afa
