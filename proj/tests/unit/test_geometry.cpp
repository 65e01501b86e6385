#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "afa/geometry.hpp"

using namespace afa;

namespace {

Triangle<double> equilateral(double a) {
    return {{0.0, 0.0}, {a, 0.0}, {0.5 * a, 0.5 * std::sqrt(3.0) * a}};
}

Triangle<double> moved(const Triangle<double>& t, double angle, Point<double> shift) {
    const double c = std::cos(angle), s = std::sin(angle);
    auto f = [&](Point<double> p) { return Point<double>{c * p.x - s * p.y + shift.x, s * p.x + c * p.y + shift.y}; };
    return {f(t.x), f(t.y), f(t.z)};
}

} // namespace

// Equilateral side a: every term is (a^2/2) / (a^2 a^2) with all edges long,
// (a^2/2) / R^4 with all edges short.
TEST(Geometry, EquilateralClosedForms) {
    EXPECT_NEAR(cyclic_sum(equilateral(1.0), 0.5), 1.5, 1e-15);
    EXPECT_NEAR(cyclic_sum(equilateral(0.1), 1.0), 0.015, 1e-15);
    EXPECT_NEAR(cyclic_sum(equilateral(1.0), 0.0), 1.5, 1e-15);
}

TEST(Geometry, RightIsosceles) {
    const Triangle<double> t{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    const auto terms = cyclic_terms(t, 0.1);
    EXPECT_DOUBLE_EQ(terms[0], 0.0);
    EXPECT_DOUBLE_EQ(terms[1], 0.5);
    EXPECT_DOUBLE_EQ(terms[2], 0.5);
    EXPECT_DOUBLE_EQ(t.inv_circumradius_sq(), 2.0);
}

TEST(Geometry, Invariances) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 200; ++k) {
        const Triangle<double> t{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
        const double R = 0.05 + 0.4 * (u(rng) + 2.0);
        const double s = cyclic_sum(t, R);
        const double scale = std::abs(cyclic_terms(t, R)[0]) + std::abs(cyclic_terms(t, R)[1]) +
                             std::abs(cyclic_terms(t, R)[2]);
        EXPECT_NEAR(cyclic_sum(moved(t, 0.7, {1.5, -0.3}), R), s, 1e-12 * scale);
        EXPECT_NEAR(cyclic_sum(Triangle<double>{t.y, t.x, t.z}, R), s, 1e-13 * scale);
        EXPECT_NEAR(cyclic_sum(Triangle<double>{t.z, t.x, t.y}, R), s, 1e-13 * scale);
        // S_R(lambda t) = lambda^-2 S_{R/lambda}(t)
        const Triangle<double> big{{3 * t.x.x, 3 * t.x.y}, {3 * t.y.x, 3 * t.y.y}, {3 * t.z.x, 3 * t.z.y}};
        EXPECT_NEAR(9.0 * cyclic_sum(big, 3 * R), s, 1e-12 * scale);
    }
}

TEST(Geometry, CoincidentPoints) {
    const Triangle<double> t{{0.3, 0.1}, {0.3, 0.1}, {1.0, -1.0}};
    EXPECT_THROW(cyclic_sum(t, 0.0), DomainError);
    const double s = cyclic_sum(t, 0.2);
    EXPECT_TRUE(std::isfinite(s));
    EXPECT_GE(s, 0.0);
    EXPECT_THROW(cyclic_sum(t, -0.1), DomainError);
    EXPECT_THROW(t.inv_circumradius_sq(), DomainError);
}

TEST(Geometry, SamplersHitTheirRegime) {
    std::mt19937_64 rng(9);
    for (Regime r : {Regime::all_long, Regime::one_short, Regime::two_short, Regime::all_short})
        for (int k = 0; k < 2000; ++k) {
            const TriangleCase c = sample_triangle(r, rng);
            EXPECT_EQ(classify(c.t, c.R), r) << to_string(r);
        }
}

TEST(Geometry, RegimeIdentitiesInQuadPrecision) {
    std::mt19937_64 rng(13);
    for (Regime r : {Regime::all_long, Regime::one_short, Regime::two_short, Regime::all_short})
        for (int k = 0; k < 2000; ++k) {
            const TriangleCase c = sample_triangle(r, rng);
            const quad err = regime_identity_error(c.t.as<quad>(), static_cast<quad>(c.R));
            if (err < 0) continue;
            EXPECT_LT(static_cast<double>(err), 1e-20) << to_string(r);
        }
}

TEST(Geometry, SuiteIsThreadIndependent) {
    const RegimeReport a = geometry_suite(Regime::uniform, 40000, 17, 1);
    const RegimeReport b = geometry_suite(Regime::uniform, 40000, 17, 3);
    EXPECT_EQ(a.samples, 40000u);
    EXPECT_EQ(a.min_normalized_sum, b.min_normalized_sum);
    EXPECT_EQ(a.max_upper_ratio, b.max_upper_ratio);
    EXPECT_EQ(a.max_identity_error, b.max_identity_error);
    EXPECT_EQ(a.lower_violations, 0u);
    EXPECT_EQ(a.circumradius_violations, 0u);
}

TEST(Geometry, SandwichOnSampledTriangles) {
    for (Regime r : all_regimes) {
        const RegimeReport rep = geometry_suite(r, 20000, 23, 1);
        EXPECT_EQ(rep.lower_violations, 0u) << to_string(r);
        EXPECT_GT(rep.max_upper_ratio, 0.0);
        EXPECT_LT(rep.max_upper_ratio, 24.0) << to_string(r);
    }
}

// x = 0, y = 1, z = 2 on a line with profile e^{|v|^2/2}:
// 2 e^{-5} - e^{-2} + 2 e^{-5} < 0.
TEST(Geometry, GaussianGrowthCounterexample) {
    const Triangle<double> t{{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}};
    const double s = profile_cyclic_sum(t, gaussian_growth_profile());
    EXPECT_NEAR(s, 4.0 * std::exp(-5.0) - std::exp(-2.0), 1e-15);
    EXPECT_LT(s, 0.0);
    const ProbeReport p = counterexample_probe(gaussian_growth_profile(), 20000, 1, 1);
    EXPECT_GT(p.violations, 0u);
}

TEST(Geometry, RegularizedNormProbeFindsNothing) {
    const ProbeReport p = counterexample_probe(regularized_norm(0.3), 50000, 1, 1);
    EXPECT_EQ(p.samples, 50000u);
    EXPECT_EQ(p.violations, 0u);
    EXPECT_NEAR(profile_cyclic_sum(equilateral(1.0), regularized_norm(0.5)), cyclic_sum(equilateral(1.0), 0.5), 1e-14);
}
