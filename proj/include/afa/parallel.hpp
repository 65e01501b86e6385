// parallel.hpp - chunked, seed-stable parallel sampling
//
// Work is cut into fixed-size chunks, each with its own RNG stream derived from
// (master seed, stream tag, chunk index). Results depend only on the chunk
// layout, never on the number of threads.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace afa {

// Worker count from AFA_THREADS (default 1).
inline unsigned thread_count() {
    const char* env = std::getenv("AFA_THREADS");
    if (!env || !*env) return 1;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || v < 1) return 1;
    return static_cast<unsigned>(std::min<long>(v, 256));
}

inline std::mt19937_64 chunk_rng(std::uint64_t seed, std::uint64_t tag, std::uint64_t chunk) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(chunk),
                      static_cast<std::uint32_t>(chunk >> 32)};
    return std::mt19937_64(seq);
}

inline constexpr std::uint64_t default_chunk = 1u << 14;

// Runs body(chunk_index, begin, end) over [0, total) and returns the per-chunk
// results in chunk order.
template <class Result, class Body>
std::vector<Result> run_chunks(std::uint64_t total, Body body, unsigned threads = thread_count(),
                               std::uint64_t chunk = default_chunk) {
    const std::uint64_t nchunks = (total + chunk - 1) / chunk;
    std::vector<Result> out(nchunks);
    auto work = [&](std::uint64_t c) {
        const std::uint64_t b = c * chunk;
        out[c] = body(c, b, std::min(total, b + chunk));
    };
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, nchunks));
    if (threads <= 1) {
        for (std::uint64_t c = 0; c < nchunks; ++c) work(c);
        return out;
    }
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::uint64_t c = next++; c < nchunks; c = next++) work(c);
        });
    for (auto& th : pool) th.join();
    return out;
}

} // namespace afa
