#pragma once
#include <cstdint>

namespace perco {

// Counter-based generator: a value is a pure function of (seed, stream,
// counter). Sampling edge e of sample s reads (seed, s, e), so results are
// identical for any worker partition and any evaluation order, eager or lazy.
// The mixer is the splitmix64 finalizer applied per key component.

inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t counter_random(std::uint64_t seed, std::uint64_t stream,
                                              std::uint64_t counter) {
    std::uint64_t h = mix64(seed ^ 0x632be59bd9b4e019ull);
    h = mix64(h ^ stream);
    h = mix64(h ^ counter);
    return h;
}

// uniform in [0, 1) with 53 random bits; u < p is exact at p = 0 and p = 1
inline double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return static_cast<double>(counter_random(seed, stream, counter) >> 11) * 0x1.0p-53;
}

inline bool edge_open(std::uint64_t seed, std::uint64_t sample, std::uint64_t edge, double p) {
    return counter_uniform(seed, sample, edge) < p;
}

}  // namespace perco
