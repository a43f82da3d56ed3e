#pragma once

#include <cstdint>
#include <random>

namespace chshlab {

// Reproducibility contract: every stochastic routine in this library is a pure
// function of (inputs, seed). The generator is std::mt19937_64, whose output
// sequence is fixed by the C++ standard, and uniform doubles are built from the
// top 53 bits of one engine output. Sub-streams (per measurement setting, per
// trial block) get their seeds from derive_stream_seed. Nothing here depends on
// the platform's distribution implementations.

/// SplitMix64 mixing step (Steele, Lea & Flood's finalizer); a bijection on u64.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for sub-stream `stream` of a run seeded with `seed`.
constexpr std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) + stream);
}

inline std::mt19937_64 seeded_engine(std::uint64_t seed) { return std::mt19937_64(seed); }

/// Uniform draw in [0, 1), 53-bit resolution.
inline double unit_half_open(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform draw in (0, 1], 53-bit resolution. Never zero.
inline double unit_open_closed(std::mt19937_64& rng) {
    return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

}  // namespace chshlab
