#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "afa/grid.hpp"

using namespace afa;

namespace {

constexpr double pi = std::numbers::pi;

double max_abs_diff(const RealField& a, const RealField& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

} // namespace

TEST(Grid, RejectsBadSizes) {
    EXPECT_THROW(GridSpec(100, 6.0), ConfigError);
    EXPECT_THROW(GridSpec(8, 6.0), ConfigError);
    EXPECT_THROW(GridSpec(64, 0.0), ConfigError);
    EXPECT_THROW(GridSpec(64, -1.0), ConfigError);
    EXPECT_THROW(GridSpec(64, std::nan("")), ConfigError);
    EXPECT_NO_THROW(GridSpec(16, 1.0));
}

TEST(Grid, Coordinates) {
    const GridSpec g(64, 6.0);
    EXPECT_DOUBLE_EQ(g.h(), 12.0 / 64.0);
    EXPECT_DOUBLE_EQ(g.coord(0), -6.0);
    EXPECT_EQ(g.coord(g.origin_index()), 0.0);
    EXPECT_DOUBLE_EQ(g.coord(63), 6.0 - g.h());
    EXPECT_EQ(g.index(3, 2), 2u * 64u + 3u);
    EXPECT_EQ(g.padded_n(), 128u);
    EXPECT_EQ(g.derivative_wavenumber(32), 0.0);
    EXPECT_DOUBLE_EQ(g.wavenumber(1), pi / 6.0);
    EXPECT_DOUBLE_EQ(g.wavenumber(63), -pi / 6.0);
}

TEST(Grid, BoxArea) {
    const GridSpec g(32, 4.0);
    RealField ones(g);
    for (double& v : ones.values) v = 1.0;
    EXPECT_DOUBLE_EQ(integrate(ones), 64.0);
}

TEST(Grid, GaussianIntegral) {
    const GridSpec g(128, 8.0);
    const auto f = RealField::sample(g, [](double x, double y) { return std::exp(-(x * x + y * y)); });
    EXPECT_NEAR(integrate(f), pi, 1e-12);
}

TEST(Grid, SpectralGradientOfGaussian) {
    const GridSpec g(128, 8.0);
    const auto f = RealField::sample(g, [](double x, double y) { return std::exp(-0.5 * (x * x + y * y)); });
    const auto d = spectral_gradient(f);
    const auto dx = RealField::sample(g, [](double x, double y) { return -x * std::exp(-0.5 * (x * x + y * y)); });
    const auto dy = RealField::sample(g, [](double x, double y) { return -y * std::exp(-0.5 * (x * x + y * y)); });
    EXPECT_LT(max_abs_diff(d.x, dx), 1e-11);
    EXPECT_LT(max_abs_diff(d.y, dy), 1e-11);
}

TEST(Grid, NegativeLaplacianOfGaussian) {
    const GridSpec g(128, 8.0);
    const auto f = ScalarField::sample(g, [](double x, double y) { return cplx(std::exp(-0.5 * (x * x + y * y)), 0); });
    const auto lap = real_part(negative_laplacian(f));
    const auto ref = RealField::sample(g, [](double x, double y) {
        const double r2 = x * x + y * y;
        return (2.0 - r2) * std::exp(-0.5 * r2);
    });
    EXPECT_LT(max_abs_diff(lap, ref), 1e-10);
}

TEST(Grid, DerivativeCommutesWithConjugation) {
    const GridSpec g(32, 4.0);
    const auto f = ScalarField::sample(g, [](double x, double y) {
        return std::polar(std::exp(-0.5 * (x * x + y * y)), 0.7 * x - 0.3 * x * y);
    });
    ScalarField fc = f;
    for (cplx& v : fc.values) v = std::conj(v);
    const auto d = spectral_gradient(f);
    const auto dc = spectral_gradient(fc);
    for (std::size_t k = 0; k < f.size(); ++k) {
        EXPECT_EQ(dc.x[k], std::conj(d.x[k]));
        EXPECT_EQ(dc.y[k], std::conj(d.y[k]));
    }
}

TEST(Grid, Parseval) {
    const GridSpec g(32, 4.0);
    const auto f = ScalarField::sample(g, [](double x, double y) { return cplx(std::exp(-x * x - 2 * y * y), x * std::exp(-y * y)); });
    const auto hat = spectral::forward(f);
    double direct = 0.0, spectral_sum = 0.0;
    for (const cplx& v : f.values) direct += std::norm(v);
    for (const cplx& v : hat) spectral_sum += std::norm(v);
    EXPECT_NEAR(direct, spectral_sum / static_cast<double>(g.size()), 1e-12 * direct);
}

TEST(Grid, ForwardTransformIsDeterministic) {
    const GridSpec g(64, 4.0);
    const auto f = ScalarField::sample(g, [](double x, double y) { return cplx(std::sin(x) * std::exp(-y * y), y); });
    const auto a = spectral::forward(f);
    const auto b = spectral::forward(f);
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k], b[k]);
}

namespace {

PaddedKernel<double> sampled_kernel(const GridSpec& g, auto&& k) {
    const std::size_t m = g.padded_n();
    const long n = static_cast<long>(g.n());
    aligned_vector<double> s(g.padded_size());
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < m; ++i)
            s[j * m + i] = k(static_cast<long>(i) - n, static_cast<long>(j) - n);
    return PaddedKernel<double>(g, std::move(s));
}

} // namespace

TEST(Grid, ConvolutionOfGaussians) {
    const GridSpec g(128, 8.0);
    const double h = g.h(), a2 = 0.5, b2 = 0.8;
    auto gauss = [](double s2) {
        return [s2](double x, double y) { return std::exp(-(x * x + y * y) / s2) / (pi * s2); };
    };
    const auto f = RealField::sample(g, gauss(a2));
    const auto k = sampled_kernel(g, [&](long mx, long my) { return gauss(b2)(mx * h, my * h); });
    const auto c = convolve(f, k);
    const auto ref = RealField::sample(g, gauss(a2 + b2));
    EXPECT_LT(max_abs_diff(c, ref), 1e-12);
}

TEST(Grid, ConvolutionIsLinearNotPeriodic) {
    const GridSpec g(16, 2.0);
    const double w = 1.0 / g.cell_weight();
    // Discrete delta at offset (3, -2): a pure shift, with nothing wrapping around.
    const auto k = sampled_kernel(g, [&](long mx, long my) { return (mx == 3 && my == -2) ? w : 0.0; });
    const auto f = RealField::sample(g, [](double x, double y) { return 1.0 + x + 10.0 * y; });
    const auto c = convolve(f, k);
    for (std::size_t j = 0; j < g.n(); ++j)
        for (std::size_t i = 0; i < g.n(); ++i) {
            const long si = static_cast<long>(i) - 3, sj = static_cast<long>(j) + 2;
            const bool inside = si >= 0 && sj >= 0 && si < 16 && sj < 16;
            const double expect = inside ? f.at(static_cast<std::size_t>(si), static_cast<std::size_t>(sj)) : 0.0;
            EXPECT_NEAR(c.at(i, j), expect, 1e-12);
        }
}

TEST(Grid, KernelGridMismatchRejected) {
    const GridSpec g(16, 2.0), other(32, 2.0);
    const auto k = sampled_kernel(g, [](long, long) { return 0.0; });
    EXPECT_THROW(convolve(RealField(other), k), ConfigError);
}

TEST(Grid, BoundaryMass) {
    const GridSpec g(64, 5.0);
    RealField ones(g);
    for (double& v : ones.values) v = 1.0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < g.n(); ++j)
        for (std::size_t i = 0; i < g.n(); ++i)
            if (std::max(std::abs(g.coord(i)), std::abs(g.coord(j))) >= 4.5) ++count;
    EXPECT_DOUBLE_EQ(boundary_mass(ones), static_cast<double>(count) * g.cell_weight());
    const auto gauss = RealField::sample(g, [](double x, double y) { return std::exp(-(x * x + y * y)) / pi; });
    EXPECT_LT(boundary_mass(gauss), 1e-8);
}

TEST(Grid, WaveFunctionNormalization) {
    const GridSpec g(32, 4.0);
    const auto f = ScalarField::sample(g, [](double x, double y) { return cplx(3.0 * std::exp(-x * x - y * y), 0.0); });
    const WaveFunction u = WaveFunction(f).normalized();
    EXPECT_NEAR(u.mass(), 1.0, 1e-14);
    EXPECT_TRUE(u.is_normalized());
    EXPECT_THROW(WaveFunction(ScalarField(g)).normalized(), NumericalError);
}
