// fft.hpp - thin RAII layer over FFTW for 2D complex transforms
#pragma once

#include <complex>
#include <cstddef>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <new>
#include <span>
#include <utility>
#include <vector>

#include <fftw3.h>

namespace afa {

using cplx = std::complex<double>;

// 64-byte aligned storage so every field buffer satisfies FFTW's SIMD alignment.
template <class T>
struct AlignedAllocator {
    using value_type = T;
    static constexpr std::align_val_t alignment{64};

    AlignedAllocator() noexcept = default;
    template <class U>
    AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

    T* allocate(std::size_t n) {
        return static_cast<T*>(::operator new(n * sizeof(T), alignment));
    }
    void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, alignment); }

    template <class U>
    bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

template <class T>
using aligned_vector = std::vector<T, AlignedAllocator<T>>;

namespace fft {

enum class Direction { forward = FFTW_FORWARD, backward = FFTW_BACKWARD };

namespace detail {

struct PlanDeleter {
    void operator()(fftw_plan_s* p) const noexcept { fftw_destroy_plan(p); }
};
using PlanHandle = std::unique_ptr<fftw_plan_s, PlanDeleter>;

inline std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// FFTW_ESTIMATE keeps plans (and hence results) identical from run to run.
inline fftw_plan plan_for(std::size_t n, Direction dir) {
    static std::map<std::pair<std::size_t, int>, PlanHandle> cache;
    std::lock_guard lock(planner_mutex());
    const auto key = std::make_pair(n, static_cast<int>(dir));
    auto it = cache.find(key);
    if (it != cache.end()) return it->second.get();
    aligned_vector<cplx> scratch(n * n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan p = fftw_plan_dft_2d(static_cast<int>(n), static_cast<int>(n), buf, buf,
                                   static_cast<int>(dir), FFTW_ESTIMATE);
    cache.emplace(key, PlanHandle(p));
    return p;
}

} // namespace detail

// Unnormalized in-place 2D transform of an n x n row-major array.
inline void transform(std::span<cplx> data, std::size_t n, Direction dir) {
    fftw_plan p = detail::plan_for(n, dir);
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(p, buf, buf);
}

inline void forward(std::span<cplx> data, std::size_t n) { transform(data, n, Direction::forward); }
inline void backward(std::span<cplx> data, std::size_t n) { transform(data, n, Direction::backward); }

} // namespace fft
} // namespace afa
