#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <cmath>
#include <numbers>

#include "afa/manybody.hpp"
#include "afa/random_states.hpp"

using namespace afa;

namespace {

WaveFunction gaussian(const GridSpec& g) {
    return WaveFunction(ScalarField::sample(g, [](double x, double y) {
        return cplx(std::exp(-0.5 * (x * x + y * y)) / std::sqrt(std::numbers::pi), 0.0);
    }));
}

} // namespace

TEST(ManyBody, ParameterValidation) {
    EXPECT_THROW((ManyBodyParams{1, 1.0, 0.1}.validate()), ConfigError);
    EXPECT_THROW((ManyBodyParams{10, 1.0, 0.0}.validate()), DomainError);
    EXPECT_THROW((ManyBodyParams{10, 1.0, -0.1}.validate()), ConfigError);
    const GridSpec g(32, 5.0);
    EXPECT_THROW(ProductStateEvaluator(gaussian(g), 0.0), DomainError);
}

TEST(ManyBody, TwoParticlesHaveNoThreeBodyTerm) {
    const GridSpec g(32, 5.0);
    const auto b = product_state_energy(random_smooth_state(g, 1, 0), ManyBodyParams{2, 1.5, 0.3});
    EXPECT_EQ(b.three_body, 0.0);
    EXPECT_GT(b.singular, 0.0);
}

TEST(ManyBody, CoefficientsAreExact) {
    const GridSpec g(32, 5.0);
    const ProductStateEvaluator ev(random_smooth_state(g, 2, 0), 0.25);
    for (long N : {2L, 3L, 10L, 1001L}) {
        const double beta = 0.7;
        const auto b = ev.evaluate(N, beta);
        const double Nm1 = static_cast<double>(N - 1);
        EXPECT_EQ(b.three_body, beta * beta * (static_cast<double>(N - 2) / Nm1) * ev.three_body_integral());
        EXPECT_EQ(b.singular, beta * beta * ev.pair_integral() / Nm1);
        EXPECT_EQ(b.mixed, beta * ev.current_coupling());
        EXPECT_NEAR(b.per_particle_total, b.one_body + b.mixed + b.three_body + b.singular, 1e-15);
    }
}

// gap = beta^2 (S - Q) / (N - 1) with S the pair integral and Q = int rho |A|^2.
TEST(ManyBody, GapDecaysLikeOneOverN) {
    const GridSpec g(32, 5.0);
    const ProductStateEvaluator ev(random_smooth_state(g, 3, 0), 0.2);
    const double S = ev.pair_integral(), Q = ev.three_body_integral();
    EXPECT_GE(S, Q);
    for (long N : {2L, 10L, 100L}) {
        const double gap = ev.evaluate(N, 1.0).per_particle_total - ev.average_field_energy(1.0);
        EXPECT_NEAR(gap, (S - Q) / static_cast<double>(N - 1), 1e-12);
    }
    EXPECT_EQ(ev.evaluate(50, 0.0).per_particle_total, ev.average_field_energy(0.0));
}

// For rho = e^{-|x|^2}/pi, rho * rho = e^{-|z|^2/2} / (2 pi), so the pair
// integral is int_0^R r^3/R^4 e^{-r^2/2} dr + E1(R^2/2) / 2.
TEST(ManyBody, PairIntegralOfGaussian) {
    const GridSpec g(256, 6.0);
    for (double R : {0.3, 0.6}) {
        const ProductStateEvaluator ev(gaussian(g), R);
        const double inner = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            [&](double r) { return r * r * r / (R * R * R * R) * std::exp(-0.5 * r * r); }, 0.0, R);
        const double ref = inner + 0.5 * boost::math::expint(1, 0.5 * R * R);
        EXPECT_NEAR(ev.pair_integral(), ref, 1e-3 * ref) << "R=" << R;
    }
}

TEST(ManyBody, MixedTermDirectSumMatchesFft) {
    const GridSpec g(32, 5.0);
    for (std::uint64_t s = 0; s < 3; ++s) {
        const WaveFunction u = random_smooth_state(g, 4, s);
        const auto c = mixed_term_crosscheck(u, 0.3);
        EXPECT_NEAR(c.direct, c.fft, 1e-10 * std::max(1.0, std::abs(c.fft)));
        EXPECT_GT(std::abs(c.fft), 1e-6);
        const auto cc = mixed_term_crosscheck(u.conjugated(), 0.3);
        EXPECT_NEAR(cc.fft, -c.fft, 1e-12);
    }
    const auto real = mixed_term_crosscheck(random_smooth_state(g, 4, 9, RandomStateOptions{1.0, false, 3}), 0.3);
    EXPECT_LT(std::abs(real.direct), 1e-12);
    EXPECT_LT(std::abs(real.fft), 1e-12);
}

TEST(ManyBody, UpperBoundReport) {
    const GridSpec g(64, 6.0);
    SolverConfig c;
    c.max_iters = 2000;
    const auto rep = upper_bound_report(ManyBodyParams{2, 1.0, 0.2}, g, {1000, 10, 100}, c);
    ASSERT_EQ(rep.rows.size(), 3u);
    EXPECT_EQ(rep.rows.front().N, 10);
    EXPECT_TRUE(rep.converged);
    EXPECT_TRUE(rep.gap_shrinks);
    for (const auto& r : rep.rows) {
        EXPECT_TRUE(r.gap_ok);
        EXPECT_GT(r.gap, 0.0);
    }
    EXPECT_NEAR(rep.rows[0].gap / rep.rows[1].gap, 99.0 / 9.0, 1e-9);
}
