#include <gtest/gtest.h>

#include <sstream>

#include "afa/sweep.hpp"

using namespace afa;

namespace {

SweepBase small_base() {
    SweepBase b;
    b.grid = GridSpec(32, 5.0);
    b.params = FunctionalParams{1.0, 0.3};
    b.solver.max_iters = 2000;
    return b;
}

} // namespace

TEST(Sweep, AxisNames) {
    EXPECT_EQ(sweep_axis_from_string("beta"), SweepAxis::beta);
    EXPECT_EQ(to_string(SweepAxis::s), "s");
    EXPECT_THROW(sweep_axis_from_string("gamma"), ConfigError);
}

TEST(Sweep, EmptyValuesRejected) {
    EXPECT_THROW(sweep(SweepAxis::beta, {}, small_base()), ConfigError);
}

TEST(Sweep, SingleValueEqualsDirectSolve) {
    const SweepBase b = small_base();
    const auto rows = sweep(SweepAxis::beta, {0.5}, b);
    ASSERT_EQ(rows.size(), 1u);
    const SolveResult r = minimize(FunctionalParams{0.5, 0.3}, b.grid, b.solver);
    EXPECT_EQ(rows[0].total, r.breakdown.total);
    EXPECT_EQ(rows[0].iterations, r.iterations);
}

TEST(Sweep, BetaRowsIncrease) {
    const auto rows = sweep(SweepAxis::beta, {0.0, 0.5, 1.0}, small_base());
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_NEAR(rows[0].total, 2.0, 1e-8);
    EXPECT_LT(rows[0].total, rows[1].total);
    EXPECT_LT(rows[1].total, rows[2].total);
    for (const auto& r : rows) EXPECT_TRUE(r.converged);
}

TEST(Sweep, FailedRowIsFlaggedAndSweepContinues) {
    const auto rows = sweep(SweepAxis::R, {0.3, -1.0, 0.2}, small_base());
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_FALSE(rows[0].failed);
    EXPECT_TRUE(rows[1].failed);
    EXPECT_FALSE(rows[1].error.empty());
    EXPECT_FALSE(rows[2].failed);
    EXPECT_TRUE(std::isfinite(rows[2].total));
}

TEST(Sweep, ParticleNumberAxis) {
    const auto rows = sweep(SweepAxis::N, {10, 100, 1.5}, small_base());
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_GT(rows[0].total, rows[1].total);
    EXPECT_EQ(rows[0].kinetic, rows[1].kinetic);
    EXPECT_TRUE(rows[2].failed);
}

TEST(Sweep, CsvColumns) {
    const auto rows = sweep(SweepAxis::beta, {0.0, 0.25}, small_base());
    std::istringstream csv(sweep_csv(rows));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "axis_value,total,kinetic,mixed,quartic,potential,converged,grad_norm,iterations");
    int n = 0;
    while (std::getline(csv, line)) {
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 8);
        ++n;
    }
    EXPECT_EQ(n, 2);
}
