#pragma once

#include <cstdint>
#include <random>

namespace tdf {

// splitmix64 step, used to whiten user seeds and derive per-path streams.
inline std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e9b5ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Per-path stream scheme: path i uses mt19937_64 seeded with the i-th
// output of splitmix64 started at the user seed. Streams are independent
// of thread scheduling, so results never depend on the thread count.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t path_index) noexcept {
    std::uint64_t s = seed + 0x9e3779b97f4a7c15ULL * (path_index + 1);
    return splitmix64(s);
}

inline std::mt19937_64 path_rng(std::uint64_t seed, std::uint64_t path_index) {
    return std::mt19937_64(stream_seed(seed, path_index));
}

// Unbiased-enough bounded draw via 64x64->128 multiply. Avoids the
// implementation-defined behaviour of std::uniform_int_distribution.
inline std::uint64_t bounded_index(std::mt19937_64& rng, std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(rng()) * n) >> 64);
}

// Uniform in (0,1); never returns exactly 0 or 1.
inline double uniform01(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

} // namespace tdf
