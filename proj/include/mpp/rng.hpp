#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace mpp {

// All randomized operations in the library draw from a seeded mt19937_64.
// The engine itself is fully specified by the standard, so seeded runs are
// reproducible. Bounded draws go through uniform_below (rejection sampling)
// instead of std::uniform_int_distribution, whose output is
// implementation-defined.
using Rng = std::mt19937_64;

inline uint64_t uniform_below(Rng& rng, uint64_t bound) {
    // bound must be >= 1; returns a value in [0, bound).
    const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t draw;
    do {
        draw = rng();
    } while (draw >= limit);
    return draw % bound;
}

// Fisher-Yates shuffle driven by uniform_below.
template <typename T>
void shuffle_values(std::vector<T>& values, Rng& rng) {
    for (size_t i = values.size(); i > 1; --i) {
        const size_t j = static_cast<size_t>(uniform_below(rng, i));
        std::swap(values[i - 1], values[j]);
    }
}

}  // namespace mpp
