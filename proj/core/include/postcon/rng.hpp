#pragma once

#include <cstdint>
#include <random>

namespace postcon {

using Rng = std::mt19937_64;

// splitmix64; used to spread a (seed, stream) pair over the engine state so
// that per-task streams are decorrelated.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Independent stream for task `stream` under a base seed. Results do not
// depend on which thread runs the task, only on (seed, stream).
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{mix64(seed), mix64(seed ^ (stream * 0x9e3779b97f4a7c15ULL + 1)),
                      mix64(stream), mix64(seed + 0x2545f4914f6cdd1dULL * stream)};
    return Rng(seq);
}

// Distributions are constructed per call: normal_distribution caches a spare
// deviate, and a cached spare shared between engines would entangle streams.
inline double standard_normal(Rng& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    return dist(rng);
}

inline double uniform_pm1(Rng& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    return dist(rng);
}

inline double uniform01(Rng& rng) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    return dist(rng);
}

}  // namespace postcon
