#pragma once

#include <cstdint>
#include <random>

namespace mdset {

// All randomized checks draw through these helpers so that a seed pins the
// whole stream across platforms (std::uniform_real_distribution is not
// guaranteed reproducible between standard libraries; this is).
using Rng = std::mt19937_64;

inline double uniform01(Rng& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& g, double lo, double hi) {
    return lo + (hi - lo) * uniform01(g);
}

// Uniform integer in [lo, hi] without distribution objects.
inline std::int64_t uniform_int(Rng& g, std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(g() % span);
}

} // namespace mdset
