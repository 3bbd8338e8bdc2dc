#pragma once

#include <cstdint>
#include <random>

namespace fds {

using Rng = std::mt19937_64;

// splitmix64, used to decorrelate derived seeds
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent stream for replica `index` derived from a master seed.
/// Determinism contract: fixed (seed, index, build) gives a fixed stream.
inline Rng make_stream(std::uint64_t seed, std::uint64_t index = 0) {
    return Rng(mix64(mix64(seed) ^ mix64(index + 1)));
}

inline double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace fds
