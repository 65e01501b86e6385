// grid.hpp - square computational box, quadrature and spectral services
//
// The box is [-L, L)^2 sampled at n x n points x_i = -L + i h, h = 2L/n.
// Storage is row-major with x fastest: index = j * n + i.  Derivatives are
// periodic spectral derivatives on the box; convolutions are linear (zero
// padded to 2n x 2n) so no periodic images enter the primary box.
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>

#include "afa/error.hpp"
#include "afa/fft.hpp"

namespace afa {

class GridSpec {
public:
    static constexpr std::size_t pad_factor = 2;
    static constexpr std::size_t min_points = 16;

    GridSpec(std::size_t n, double half_width) : n_(n), half_width_(half_width) {
        if (n < min_points || !std::has_single_bit(n))
            throw ConfigError("grid: n must be a power of two >= 16, got " + std::to_string(n));
        if (!(half_width > 0.0) || !std::isfinite(half_width))
            throw ConfigError("grid: half width must be positive and finite");
    }

    std::size_t n() const noexcept { return n_; }
    double half_width() const noexcept { return half_width_; }
    double h() const noexcept { return 2.0 * half_width_ / static_cast<double>(n_); }
    double cell_weight() const noexcept { return h() * h(); }
    std::size_t size() const noexcept { return n_ * n_; }
    std::size_t padded_n() const noexcept { return pad_factor * n_; }
    std::size_t padded_size() const noexcept { return padded_n() * padded_n(); }

    // Index of the grid point at the origin along each axis.
    std::size_t origin_index() const noexcept { return n_ / 2; }
    double coord(std::size_t i) const noexcept {
        return -half_width_ + static_cast<double>(i) * h();
    }
    std::size_t index(std::size_t i, std::size_t j) const noexcept { return j * n_ + i; }

    // Angular wavenumber of FFT bin i (signed mode m -> pi m / L).
    double wavenumber(std::size_t i) const noexcept {
        const auto m = static_cast<double>(i < n_ / 2 ? static_cast<long>(i)
                                                      : static_cast<long>(i) - static_cast<long>(n_));
        return std::numbers::pi * m / half_width_;
    }
    // Wavenumber used for differentiation: the unpaired Nyquist bin is zeroed so that
    // derivatives of real fields stay real and D(conj u) = conj(D u) exactly.
    double derivative_wavenumber(std::size_t i) const noexcept {
        return i == n_ / 2 ? 0.0 : wavenumber(i);
    }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    std::size_t n_;
    double half_width_;
};

template <class T>
struct Field {
    GridSpec grid;
    aligned_vector<T> values;

    explicit Field(GridSpec g) : grid(g), values(g.size(), T{}) {}
    Field(GridSpec g, aligned_vector<T> v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.size()) throw ConfigError("field: sample count does not match grid");
    }

    T& operator[](std::size_t k) noexcept { return values[k]; }
    const T& operator[](std::size_t k) const noexcept { return values[k]; }
    T& at(std::size_t i, std::size_t j) noexcept { return values[grid.index(i, j)]; }
    const T& at(std::size_t i, std::size_t j) const noexcept { return values[grid.index(i, j)]; }
    std::size_t size() const noexcept { return values.size(); }

    template <class F>
    static Field sample(GridSpec g, F&& f) {
        Field out(g);
        for (std::size_t j = 0; j < g.n(); ++j)
            for (std::size_t i = 0; i < g.n(); ++i) out.at(i, j) = f(g.coord(i), g.coord(j));
        return out;
    }
};

using ScalarField = Field<cplx>;
using RealField = Field<double>;

template <class T>
struct VectorField2 {
    Field<T> x;
    Field<T> y;

    explicit VectorField2(GridSpec g) : x(g), y(g) {}
    VectorField2(Field<T> fx, Field<T> fy) : x(std::move(fx)), y(std::move(fy)) {
        if (!(x.grid == y.grid)) throw ConfigError("vector field: component grids differ");
    }
    const GridSpec& grid() const noexcept { return x.grid; }
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
    if (!(a == b)) throw ConfigError(std::string(what) + ": grid mismatch");
}

// h^2 * sum f_ij
template <class T>
T integrate(const Field<T>& f) {
    T acc{};
    for (const T& v : f.values) acc += v;
    return acc * f.grid.cell_weight();
}

// <a, b> = h^2 * sum conj(a) b
inline cplx inner(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a.grid, b.grid, "inner");
    cplx acc{};
    for (std::size_t k = 0; k < a.size(); ++k) acc += std::conj(a[k]) * b[k];
    return acc * a.grid.cell_weight();
}

inline double norm_sq(const ScalarField& a) {
    double acc = 0.0;
    for (const cplx& v : a.values) acc += std::norm(v);
    return acc * a.grid.cell_weight();
}

inline RealField real_part(const ScalarField& f) {
    RealField out(f.grid);
    for (std::size_t k = 0; k < f.size(); ++k) out[k] = f[k].real();
    return out;
}

inline ScalarField to_complex(const RealField& f) {
    ScalarField out(f.grid);
    for (std::size_t k = 0; k < f.size(); ++k) out[k] = f[k];
    return out;
}

// Mass of a density in the outer band max(|x|, |y|) >= (1 - band) L of the box.
inline double boundary_mass(const RealField& rho, double band = 0.1) {
    const GridSpec& g = rho.grid;
    const double cut = (1.0 - band) * g.half_width();
    double acc = 0.0;
    for (std::size_t j = 0; j < g.n(); ++j)
        for (std::size_t i = 0; i < g.n(); ++i)
            if (std::max(std::abs(g.coord(i)), std::abs(g.coord(j))) >= cut) acc += rho.at(i, j);
    return acc * g.cell_weight();
}

// ---------------------------------------------------------------------------
// Spectral differentiation

namespace spectral {

inline aligned_vector<cplx> forward(const ScalarField& f) {
    aligned_vector<cplx> hat(f.values.begin(), f.values.end());
    fft::forward(hat, f.grid.n());
    return hat;
}

inline aligned_vector<cplx> forward(const RealField& f) {
    aligned_vector<cplx> hat(f.values.begin(), f.values.end());
    fft::forward(hat, f.grid.n());
    return hat;
}

// Inverse transform including the 1/n^2 normalization.
inline ScalarField backward(GridSpec g, aligned_vector<cplx> hat) {
    fft::backward(hat, g.n());
    const double scale = 1.0 / static_cast<double>(g.size());
    for (cplx& v : hat) v *= scale;
    return ScalarField(g, std::move(hat));
}

// Multiply a spectrum by i k along one axis (axis 0 = x, 1 = y).
inline aligned_vector<cplx> derivative(const GridSpec& g, const aligned_vector<cplx>& hat, int axis) {
    aligned_vector<cplx> out(hat.size());
    const std::size_t n = g.n();
    for (std::size_t j = 0; j < n; ++j) {
        const double ky = g.derivative_wavenumber(j);
        for (std::size_t i = 0; i < n; ++i) {
            const double k = axis == 0 ? g.derivative_wavenumber(i) : ky;
            out[j * n + i] = cplx(0.0, k) * hat[j * n + i];
        }
    }
    return out;
}

} // namespace spectral

inline VectorField2<cplx> spectral_gradient(const ScalarField& f) {
    const auto hat = spectral::forward(f);
    return VectorField2<cplx>(spectral::backward(f.grid, spectral::derivative(f.grid, hat, 0)),
                              spectral::backward(f.grid, spectral::derivative(f.grid, hat, 1)));
}

inline VectorField2<double> spectral_gradient(const RealField& f) {
    const auto hat = spectral::forward(f);
    return VectorField2<double>(real_part(spectral::backward(f.grid, spectral::derivative(f.grid, hat, 0))),
                                real_part(spectral::backward(f.grid, spectral::derivative(f.grid, hat, 1))));
}

// -D^2 u: multiplication by |k|^2 with the differentiation wavenumbers.
inline ScalarField negative_laplacian(const ScalarField& f) {
    auto hat = spectral::forward(f);
    const GridSpec& g = f.grid;
    const std::size_t n = g.n();
    for (std::size_t j = 0; j < n; ++j) {
        const double ky = g.derivative_wavenumber(j);
        for (std::size_t i = 0; i < n; ++i) {
            const double kx = g.derivative_wavenumber(i);
            hat[j * n + i] *= kx * kx + ky * ky;
        }
    }
    return spectral::backward(g, std::move(hat));
}

inline RealField spectral_divergence(const VectorField2<double>& v) {
    const GridSpec& g = v.grid();
    auto dx = spectral::derivative(g, spectral::forward(v.x), 0);
    const auto dy = spectral::derivative(g, spectral::forward(v.y), 1);
    for (std::size_t k = 0; k < dx.size(); ++k) dx[k] += dy[k];
    return real_part(spectral::backward(g, std::move(dx)));
}

// d1 v2 - d2 v1
inline RealField spectral_curl(const VectorField2<double>& v) {
    const GridSpec& g = v.grid();
    auto d1v2 = spectral::derivative(g, spectral::forward(v.y), 0);
    const auto d2v1 = spectral::derivative(g, spectral::forward(v.x), 1);
    for (std::size_t k = 0; k < d1v2.size(); ++k) d1v2[k] -= d2v1[k];
    return real_part(spectral::backward(g, std::move(d1v2)));
}

// ---------------------------------------------------------------------------
// Linear convolution against kernels sampled on the padded grid

// Kernel samples on the 2n x 2n padded grid, centered: padded index k along an
// axis corresponds to the offset (k - n) h.  The spectrum of the wrapped kernel
// is computed once at construction.
template <class K>
class PaddedKernel {
public:
    PaddedKernel(GridSpec grid, aligned_vector<K> centered)
        : grid_(grid), samples_(std::move(centered)), spectrum_(grid.padded_size()) {
        if (samples_.size() != grid_.padded_size())
            throw ConfigError("kernel: expected samples on the 2n x 2n padded grid");
        const std::size_t m = grid_.padded_n();
        const std::size_t n = grid_.n();
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t i = 0; i < m; ++i)
                spectrum_[((j + n) % m) * m + (i + n) % m] = samples_[j * m + i];
        fft::forward(spectrum_, m);
    }

    const GridSpec& grid() const noexcept { return grid_; }
    std::span<const K> samples() const noexcept { return samples_; }
    std::span<const cplx> spectrum() const noexcept { return spectrum_; }

    // Sample at offset (mx h, my h), |mx|, |my| < n.
    K at_offset(long mx, long my) const noexcept {
        const auto n = static_cast<long>(grid_.n());
        const auto m = static_cast<std::size_t>(2 * n);
        return samples_[static_cast<std::size_t>(my + n) * m + static_cast<std::size_t>(mx + n)];
    }

private:
    GridSpec grid_;
    aligned_vector<K> samples_;
    aligned_vector<cplx> spectrum_;
};

namespace detail {

template <class T>
ScalarField padded_convolve(const Field<T>& f, std::span<const cplx> spectrum) {
    const GridSpec& g = f.grid;
    const std::size_t n = g.n();
    const std::size_t m = g.padded_n();
    aligned_vector<cplx> buf(g.padded_size(), cplx{});
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) buf[j * m + i] = f.at(i, j);
    fft::forward(buf, m);
    for (std::size_t k = 0; k < buf.size(); ++k) buf[k] *= spectrum[k];
    fft::backward(buf, m);
    const double scale = g.cell_weight() / static_cast<double>(g.padded_size());
    ScalarField out(g);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) out.at(i, j) = buf[j * m + i] * scale;
    return out;
}

} // namespace detail

// (f * k)(x_i) = h^2 sum_j f(x_j) k(x_i - x_j)
inline RealField convolve(const RealField& f, const PaddedKernel<double>& kernel) {
    require_same_grid(f.grid, kernel.grid(), "convolve");
    return real_part(detail::padded_convolve(f, kernel.spectrum()));
}

template <class T, class K>
ScalarField convolve(const Field<T>& f, const PaddedKernel<K>& kernel) {
    require_same_grid(f.grid, kernel.grid(), "convolve");
    return detail::padded_convolve(f, kernel.spectrum());
}

// ---------------------------------------------------------------------------

// A complex field on the grid with its discrete mass h^2 sum |u|^2 cached.
class WaveFunction {
public:
    explicit WaveFunction(ScalarField f) : field_(std::move(f)), mass_(norm_sq(field_)) {}

    const ScalarField& field() const noexcept { return field_; }
    const GridSpec& grid() const noexcept { return field_.grid; }
    // Discrete integral of |u|^2.
    double mass() const noexcept { return mass_; }
    bool is_normalized(double tol = 1e-10) const noexcept { return std::abs(mass_ - 1.0) < tol; }

    WaveFunction normalized() const {
        if (!(mass_ > 0.0) || !std::isfinite(mass_)) throw NumericalError("cannot normalize a zero or non-finite state");
        ScalarField f = field_;
        const double s = 1.0 / std::sqrt(mass_);
        for (cplx& v : f.values) v *= s;
        return WaveFunction(std::move(f));
    }

    WaveFunction conjugated() const {
        ScalarField f = field_;
        for (cplx& v : f.values) v = std::conj(v);
        return WaveFunction(std::move(f));
    }

private:
    ScalarField field_;
    double mass_;
};

} // namespace afa
