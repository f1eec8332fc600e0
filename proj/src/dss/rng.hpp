#pragma once

#include <cstdint>
#include <random>

namespace dss {

using Rng = std::mt19937_64;

// SplitMix64 step. Used only to turn (master seed, stream index) pairs into
// well-separated mt19937_64 seeds so that per-shot streams are independent
// and a run is reproducible for a fixed master seed regardless of how shots
// are scheduled across workers.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Stream `index` of the generator family rooted at `master_seed`.
inline Rng make_stream(std::uint64_t master_seed, std::uint64_t index) {
    std::uint64_t s = master_seed;
    std::uint64_t a = splitmix64(s);
    s ^= index;
    std::uint64_t b = splitmix64(s);
    return Rng(a ^ (b * 0xda942042e4dd58b5ull));
}

// Uniform integer in [0, n) by rejection; avoids the implementation-defined
// behavior of std::uniform_int_distribution so sequences are stable across
// standard libraries.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % n;
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) {
    return uniform_unit(rng) < p;
}

inline int coin_flip(Rng& rng) {
    return static_cast<int>(rng() >> 63);
}

}  // namespace dss
