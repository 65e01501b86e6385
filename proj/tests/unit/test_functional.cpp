#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "afa/functional.hpp"
#include "afa/random_states.hpp"

using namespace afa;

namespace {

constexpr double pi = std::numbers::pi;

WaveFunction oscillator_ground_state(const GridSpec& g) {
    return WaveFunction(ScalarField::sample(g, [](double x, double y) {
        return cplx(std::exp(-0.5 * (x * x + y * y)) / std::sqrt(pi), 0.0);
    }));
}

ScalarField axpy(const ScalarField& u, double t, const ScalarField& v) {
    ScalarField out = u;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += t * v[k];
    return out;
}

} // namespace

TEST(Functional, RejectsBadParameters) {
    const GridSpec g(16, 2.0);
    EXPECT_THROW(AverageFieldFunctional(g, FunctionalParams{1.0, -0.1}), ConfigError);
    EXPECT_THROW(AverageFieldFunctional(g, FunctionalParams{std::nan(""), 0.1}), ConfigError);
    EXPECT_THROW(AverageFieldFunctional(g, (FunctionalParams{1.0, 0.1, TrapPotential{-1.0, 2.0}})), ConfigError);
}

TEST(Functional, OscillatorGroundState) {
    const GridSpec g(128, 8.0);
    const WaveFunction u = oscillator_ground_state(g);
    const AverageFieldFunctional F(g, FunctionalParams{0.0, 0.0});
    const auto e = F.energy(u);
    EXPECT_NEAR(e.kinetic, 1.0, 1e-10);
    EXPECT_NEAR(e.potential, 1.0, 1e-10);
    EXPECT_EQ(e.mixed, 0.0);
    EXPECT_EQ(e.quartic, 0.0);
    EXPECT_NEAR(e.total, 2.0, 1e-10);
    // -Laplace u + |x|^2 u = 2 u
    const auto G = F.gradient(u.field());
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(std::abs(G[k] - 2.0 * u.field()[k]), 0.0, 1e-9);
}

// For rho = e^{-|x|^2}/pi and R = 0, |A| = (1 - e^{-r^2}) / r and
// int rho |A|^2 = int_0^inf (e^{-s} - 2 e^{-2s} + e^{-3s}) / s ds = log(4/3).
TEST(Functional, QuarticTermOfGaussian) {
    const GridSpec g(256, 8.0);
    const WaveFunction u = oscillator_ground_state(g);
    const auto e = AverageFieldFunctional(g, FunctionalParams{2.0, 0.0}).energy(u);
    EXPECT_NEAR(e.quartic / 4.0, std::log(4.0 / 3.0), 1e-3);
    EXPECT_NEAR(e.mixed, 0.0, 1e-15);
}

TEST(Functional, GradientMatchesFiniteDifferences) {
    const GridSpec g(32, 5.0);
    for (auto [beta, R] : {std::pair{1.0, 0.0}, std::pair{1.0, 0.4}, std::pair{-2.5, 0.1}}) {
        const AverageFieldFunctional F(g, FunctionalParams{beta, R});
        for (std::uint64_t s = 0; s < 3; ++s) {
            const WaveFunction u = random_smooth_state(g, 11, s);
            const WaveFunction v = random_smooth_state(g, 12, s);
            const double t = 1e-4;
            const double fd = (F.energy(axpy(u.field(), t, v.field())).total -
                               F.energy(axpy(u.field(), -t, v.field())).total) / (2 * t);
            const double an = 2.0 * inner(v.field(), F.gradient(u.field())).real();
            EXPECT_NEAR(fd, an, 1e-6 * std::abs(an)) << "beta=" << beta << " R=" << R << " s=" << s;
        }
    }
}

TEST(Functional, GlobalPhaseInvariance) {
    const GridSpec g(32, 5.0);
    const WaveFunction u = random_smooth_state(g, 3, 0);
    ScalarField v = u.field();
    for (cplx& z : v.values) z *= std::polar(1.0, 0.9);
    const AverageFieldFunctional F(g, FunctionalParams{1.5, 0.2});
    EXPECT_NEAR(F.energy(v).total, F.energy(u).total, 1e-12);
}

TEST(Functional, ConjugationFlipsBeta) {
    const GridSpec g(32, 5.0);
    const WaveFunction u = random_smooth_state(g, 5, 1);
    const auto plus = energy(u.conjugated(), FunctionalParams{1.3, 0.2});
    const auto minus = energy(u, FunctionalParams{-1.3, 0.2});
    EXPECT_NEAR(plus.total, minus.total, 1e-12);
    EXPECT_NEAR(plus.mixed, minus.mixed, 1e-12);
}

TEST(Functional, RealStatesAreEvenInBeta) {
    const GridSpec g(32, 5.0);
    const WaveFunction u = random_smooth_state(g, 5, 2, RandomStateOptions{1.0, false, 3});
    const auto p = energy(u, FunctionalParams{0.8, 0.1});
    const auto m = energy(u, FunctionalParams{-0.8, 0.1});
    EXPECT_EQ(p.mixed, 0.0);
    EXPECT_NEAR(p.total, m.total, 1e-14);
}

TEST(Functional, QuarticScalesWithBetaSquared) {
    const GridSpec g(32, 5.0);
    const WaveFunction u = random_smooth_state(g, 8, 0);
    const auto a = energy(u, FunctionalParams{1.0, 0.3});
    const auto b = energy(u, FunctionalParams{3.0, 0.3});
    EXPECT_NEAR(b.quartic, 9.0 * a.quartic, 1e-12 * b.quartic);
    EXPECT_NEAR(b.mixed, 3.0 * a.mixed, 1e-12 * std::abs(b.mixed) + 1e-15);
    EXPECT_EQ(a.kinetic, b.kinetic);
}

// Nodes flagged in the far tail carry no weight; the two forms agree once the
// state is resolved.
TEST(Functional, ModulusPhaseFormAgrees) {
    const GridSpec g(128, 6.0);
    for (std::uint64_t s = 0; s < 3; ++s) {
        const WaveFunction u = random_smooth_state(g, 21, s);
        const AverageFieldFunctional F(g, FunctionalParams{1.0, 0.25});
        const auto e = F.energy(u);
        const auto alt = F.energy_alt(u.field());
        EXPECT_NEAR(alt.total, e.total, 1e-6 * e.total);
        EXPECT_NEAR(alt.modulus_kinetic, F.modulus_kinetic(u.field()), 1e-14);
    }
}

TEST(Functional, ModulusPhaseFormFlagsNodes) {
    const GridSpec g(32, 5.0);
    // x e^{-|x|^2/2} vanishes on the grid column x = 0.
    const WaveFunction u = WaveFunction(ScalarField::sample(g, [](double x, double y) {
        return cplx(x * std::exp(-0.5 * (x * x + y * y)), 0.0);
    })).normalized();
    const auto alt = energy_alt(u, FunctionalParams{1.0, 0.2});
    EXPECT_TRUE(alt.flagged());
    EXPECT_EQ(alt.vanishing_nodes.size(), g.n());
}

TEST(Functional, DiamagneticOnSmoothStates) {
    const GridSpec g(64, 6.0);
    for (std::uint64_t s = 0; s < 4; ++s) {
        const WaveFunction u = random_smooth_state(g, 31, s);
        const AverageFieldFunctional F(g, FunctionalParams{2.0, 0.2});
        EXPECT_GE(F.energy(u).magnetic_kinetic(), F.modulus_kinetic(u.field()) - 1e-8);
    }
}

TEST(Functional, TangentProjection) {
    const GridSpec g(32, 5.0);
    const WaveFunction u = random_smooth_state(g, 41, 0);
    const auto G = gradient(u, FunctionalParams{1.0, 0.2});
    const auto P = sphere_project(G, u);
    EXPECT_NEAR(inner(u.field(), P).real(), 0.0, 1e-12);
}
