// state_io.hpp - binary wave-function snapshots
//
// Layout (little endian): "AFGS", u32 version = 1, u64 n, f64 L, f64 beta,
// f64 R, then n^2 samples as (re, im) f64 pairs, row-major, x fastest.
#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "afa/error.hpp"
#include "afa/grid.hpp"

namespace afa {

struct StateFile {
    WaveFunction u;
    double beta = 0.0;
    double R = 0.0;
};

inline constexpr std::array<char, 4> state_magic{'A', 'F', 'G', 'S'};
inline constexpr std::uint32_t state_version = 1;

namespace detail {

template <class T>
void put_le(std::vector<char>& out, T v) {
    std::array<char, sizeof(T)> b;
    std::memcpy(b.data(), &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
    out.insert(out.end(), b.begin(), b.end());
}

template <class T>
T get_le(const std::vector<char>& in, std::size_t& pos) {
    if (pos + sizeof(T) > in.size()) throw FormatError("state file truncated");
    std::array<char, sizeof(T)> b;
    std::memcpy(b.data(), in.data() + pos, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
    pos += sizeof(T);
    T v;
    std::memcpy(&v, b.data(), sizeof(T));
    return v;
}

} // namespace detail

// Writes the whole file to a temporary sibling and renames it into place.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ConfigError("cannot open " + tmp.string() + " for writing");
        f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!f) throw ConfigError("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::vector<char> encode_state(const WaveFunction& u, double beta, double R) {
    const GridSpec& g = u.grid();
    std::vector<char> out(state_magic.begin(), state_magic.end());
    out.reserve(4 + 4 + 8 * 4 + 16 * g.size());
    detail::put_le<std::uint32_t>(out, state_version);
    detail::put_le<std::uint64_t>(out, g.n());
    detail::put_le<double>(out, g.half_width());
    detail::put_le<double>(out, beta);
    detail::put_le<double>(out, R);
    for (std::size_t k = 0; k < g.size(); ++k) {
        detail::put_le<double>(out, u.field()[k].real());
        detail::put_le<double>(out, u.field()[k].imag());
    }
    return out;
}

inline StateFile decode_state(const std::vector<char>& in) {
    if (in.size() < 4 || !std::equal(state_magic.begin(), state_magic.end(), in.begin()))
        throw FormatError("not a state file (bad magic)");
    std::size_t pos = 4;
    const auto version = detail::get_le<std::uint32_t>(in, pos);
    if (version != state_version) throw FormatError("unsupported state file version " + std::to_string(version));
    const auto n = detail::get_le<std::uint64_t>(in, pos);
    const double L = detail::get_le<double>(in, pos);
    const double beta = detail::get_le<double>(in, pos);
    const double R = detail::get_le<double>(in, pos);
    if (n > (1u << 15)) throw FormatError("state file grid size " + std::to_string(n) + " out of range");
    GridSpec g = [&] {
        try {
            return GridSpec(static_cast<std::size_t>(n), L);
        } catch (const ConfigError& e) {
            throw FormatError(std::string("state file header: ") + e.what());
        }
    }();
    if (in.size() != pos + 16 * g.size()) throw FormatError("state file size does not match its header");
    ScalarField f(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double re = detail::get_le<double>(in, pos);
        const double im = detail::get_le<double>(in, pos);
        f[k] = cplx(re, im);
    }
    return StateFile{WaveFunction(std::move(f)), beta, R};
}

inline void save_state(const std::filesystem::path& path, const WaveFunction& u, double beta, double R) {
    const auto bytes = encode_state(u, beta, R);
    write_file_atomic(path, std::string(bytes.begin(), bytes.end()));
}

inline StateFile load_state(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open state file " + path.string());
    std::vector<char> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return decode_state(bytes);
}

// Loads a state that must live on `expected`; a different grid is rejected,
// never resampled.
inline StateFile load_state(const std::filesystem::path& path, const GridSpec& expected) {
    StateFile s = load_state(path);
    if (!(s.u.grid() == expected))
        throw ConfigError("state file grid (n=" + std::to_string(s.u.grid().n()) +
                          ", L=" + std::to_string(s.u.grid().half_width()) + ") does not match the requested grid");
    return s;
}

} // namespace afa
