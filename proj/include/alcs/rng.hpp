#pragma once

#include <cstdint>
#include <random>

namespace alcs {

// The run-level rng streams. Each stream is an independent mt19937_64 seeded
// by splitmix64 from (base_seed, stream id), so toggling one consumer does
// not shift the draws seen by the others.
enum class RngStream : std::uint64_t {
    action = 1,     // epsilon draws + random actions
    low_tie = 2,    // low-level argmax tie-breaking
    high_tie = 3,   // high-level argmax tie-breaking
    eval = 4,       // greedy-evaluation tie-breaking
    goal = 5,       // HER behavior-goal sampling
    option = 6,     // option-selection exploration (hrl / interrupting)
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::mt19937_64 make_stream(std::uint64_t base_seed, RngStream stream) {
    return std::mt19937_64(splitmix64(base_seed ^ splitmix64(static_cast<std::uint64_t>(stream))));
}

// Uniform integer in [0, n) via rejection sampling; portable across stdlibs.
inline std::uint32_t uniform_below(std::mt19937_64& rng, std::uint32_t n) {
    const std::uint64_t limit = ~0ULL - (~0ULL % n);
    std::uint64_t v = rng();
    while (v >= limit) v = rng();
    return static_cast<std::uint32_t>(v % n);
}

// Uniform double in [0, 1) with 53 random bits.
inline double canonical(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace alcs
