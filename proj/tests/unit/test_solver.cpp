#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "afa/solver.hpp"

using namespace afa;

namespace {

SolverConfig quick() {
    SolverConfig c;
    c.max_iters = 2000;
    return c;
}

} // namespace

TEST(Solver, ConfigValidation) {
    SolverConfig c;
    c.backtrack = 1.0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = SolverConfig{};
    c.tol_grad = 0.0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = SolverConfig{};
    c.init = InitKind::from_file;
    EXPECT_THROW(c.validate(), ConfigError);
    EXPECT_THROW(init_kind_from_string("cold"), ConfigError);
    EXPECT_EQ(init_kind_from_string("gaussian_vortex"), InitKind::gaussian_vortex);
}

TEST(Solver, HarmonicOscillatorFromPerturbedStart) {
    const GridSpec g(64, 6.0);
    SolverConfig c = quick();
    c.init = InitKind::seeded_random_perturbation;
    c.seed = 3;
    const SolveResult r = minimize(FunctionalParams{0.0, 0.0}, g, c);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.breakdown.total, 2.0, 1e-8);
    EXPECT_NEAR(r.u.mass(), 1.0, 1e-12);
    // |u|^2 is the oscillator density e^{-|x|^2} / pi
    const RealField rho = density(r.u);
    double l1 = 0.0;
    for (std::size_t j = 0; j < g.n(); ++j)
        for (std::size_t i = 0; i < g.n(); ++i) {
            const double x = g.coord(i), y = g.coord(j);
            l1 += std::abs(rho.at(i, j) - std::exp(-(x * x + y * y)) / std::numbers::pi);
        }
    EXPECT_LT(l1 * g.cell_weight(), 1e-4);
}

TEST(Solver, EnergyHistoryIsMonotone) {
    const GridSpec g(64, 6.0);
    SolverConfig c = quick();
    c.init = InitKind::seeded_random_perturbation;
    const SolveResult r = minimize(FunctionalParams{1.0, 0.2}, g, c);
    ASSERT_GE(r.energy_history.size(), 2u);
    for (std::size_t k = 1; k < r.energy_history.size(); ++k)
        EXPECT_LT(r.energy_history[k], r.energy_history[k - 1]);
    EXPECT_EQ(r.energy_history.back(), r.breakdown.total);
    EXPECT_EQ(r.energy_history.size(), static_cast<std::size_t>(r.iterations) + 1);
}

TEST(Solver, WarmRestartIsImmediate) {
    const GridSpec g(64, 6.0);
    const FunctionalParams p{1.0, 0.2};
    const SolveResult first = minimize(p, g, quick());
    ASSERT_TRUE(first.converged);
    SolverConfig c = quick();
    c.init = InitKind::from_file;
    c.initial_state = first.u;
    const SolveResult again = minimize(p, g, c);
    EXPECT_TRUE(again.converged);
    EXPECT_LE(again.iterations, 2);
    EXPECT_NEAR(again.breakdown.total, first.breakdown.total, 1e-10);
}

TEST(Solver, InitialStatesReachTheSameMinimum) {
    const GridSpec g(64, 6.0);
    const FunctionalParams p{1.0, 0.3};
    const double ref = minimize(p, g, quick()).breakdown.total;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        SolverConfig c = quick();
        c.init = InitKind::seeded_random_perturbation;
        c.seed = seed;
        EXPECT_NEAR(minimize(p, g, c).breakdown.total, ref, 1e-8 * ref) << "seed " << seed;
    }
}

TEST(Solver, CouplingRaisesTheEnergy) {
    const GridSpec g(64, 6.0);
    const double e0 = minimize(FunctionalParams{0.0, 0.2}, g, quick()).breakdown.total;
    const double e1 = minimize(FunctionalParams{0.5, 0.2}, g, quick()).breakdown.total;
    const double e2 = minimize(FunctionalParams{1.0, 0.2}, g, quick()).breakdown.total;
    EXPECT_GT(e1, e0);
    EXPECT_GT(e2, e1);
}

TEST(Solver, SmallBoxWarns) {
    const GridSpec g(32, 2.0);
    const SolveResult r = minimize(FunctionalParams{0.0, 0.0}, g, quick());
    ASSERT_FALSE(r.warnings.empty());
    bool boundary = false;
    for (const auto& w : r.warnings) boundary = boundary || w.find("boundary mass") != std::string::npos;
    EXPECT_TRUE(boundary);
}

TEST(Solver, StallCarriesLastState) {
    const GridSpec g(32, 5.0);
    SolverConfig c = quick();
    c.init = InitKind::seeded_random_perturbation;
    c.step0 = 1e6;
    c.max_halvings = 0;
    try {
        minimize(FunctionalParams{1.0, 0.2}, g, c);
        FAIL() << "expected a stall";
    } catch (const SolverError& e) {
        EXPECT_EQ(e.kind(), SolverError::Kind::stalled);
        EXPECT_NEAR(e.last_state().mass(), 1.0, 1e-12);
    }
}

TEST(Solver, WindingNumber) {
    const GridSpec g(64, 6.0);
    EXPECT_EQ(winding_number(gaussian_state(g, 1.0, true), 1.0), 1);
    EXPECT_EQ(winding_number(gaussian_state(g, 1.0, false), 1.0), 0);
    EXPECT_EQ(winding_number(gaussian_state(g, 1.0, true).conjugated(), 1.0), -1);
}
