// random_states.hpp - seeded smooth test states
//
// A positive envelope (Gaussian times 1 + positive bumps) times a smooth random
// phase, normalized. The modulus never vanishes on the grid, so |u| is as
// smooth as u and modulus/phase quantities are well defined.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "afa/grid.hpp"
#include "afa/parallel.hpp"

namespace afa {

struct RandomStateOptions {
    double width = 1.0; // envelope length scale
    bool phased = true;
    int bumps = 3;
};

inline WaveFunction random_smooth_state(const GridSpec& g, std::mt19937_64& rng, const RandomStateOptions& opt = {}) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const double s = opt.width * (1.0 + 0.25 * uni(rng));
    const double cx = 0.3 * opt.width * uni(rng), cy = 0.3 * opt.width * uni(rng);
    const double aniso = 1.0 + 0.2 * uni(rng);
    struct Bump { double x, y, amp, w; };
    std::vector<Bump> amp_bumps(static_cast<std::size_t>(opt.bumps)), phase_bumps(amp_bumps.size());
    for (auto& b : amp_bumps) b = {opt.width * uni(rng), opt.width * uni(rng), 0.6 * (uni(rng) + 1.0), 0.5 + 0.25 * uni(rng)};
    for (auto& b : phase_bumps) b = {opt.width * uni(rng), opt.width * uni(rng), 1.5 * uni(rng), 0.6 + 0.3 * uni(rng)};
    const double kx = uni(rng), ky = uni(rng), q = 0.5 * uni(rng);
    auto f = ScalarField::sample(g, [&](double x, double y) {
        const double dx = (x - cx) / s, dy = (y - cy) * aniso / s;
        double amp = 1.0;
        for (const Bump& b : amp_bumps) {
            const double d2 = ((x - b.x) * (x - b.x) + (y - b.y) * (y - b.y)) / (b.w * b.w * opt.width * opt.width);
            amp += b.amp * std::exp(-d2);
        }
        amp *= std::exp(-0.5 * (dx * dx + dy * dy));
        if (!opt.phased) return cplx(amp, 0.0);
        double phase = (kx * x + ky * y) / opt.width + q * x * y / (opt.width * opt.width);
        for (const Bump& b : phase_bumps) {
            const double d2 = ((x - b.x) * (x - b.x) + (y - b.y) * (y - b.y)) / (b.w * b.w * opt.width * opt.width);
            phase += b.amp * std::exp(-d2);
        }
        return std::polar(amp, phase);
    });
    return WaveFunction(std::move(f)).normalized();
}

// The index-th state of a seeded family; independent of how many states are drawn.
inline WaveFunction random_smooth_state(const GridSpec& g, std::uint64_t seed, std::uint64_t index,
                                        const RandomStateOptions& opt = {}) {
    auto rng = chunk_rng(seed, 200, index);
    return random_smooth_state(g, rng, opt);
}

} // namespace afa
