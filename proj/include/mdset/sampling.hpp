#pragma once

#include <algorithm>
#include <vector>

#include "mdset/rng.hpp"
#include "mdset/set_core.hpp"

namespace mdset {

// Random product set: dimension in [1, d_max], base in [3, b_max], each
// coordinate a random proper digit subset of size >= 2.
inline ProductSet random_product_set(Rng& rng, int d_max = 4, int b_max = 10) {
    const int d = static_cast<int>(uniform_int(rng, 1, d_max));
    const int b = static_cast<int>(uniform_int(rng, 3, b_max));
    ProductSet ps;
    ps.base = b;
    for (int i = 0; i < d; ++i) {
        const int n = static_cast<int>(uniform_int(rng, 2, b - 1));
        std::vector<int> pool(static_cast<std::size_t>(b));
        for (int k = 0; k < b; ++k) pool[static_cast<std::size_t>(k)] = k;
        // partial Fisher-Yates, keep the first n
        for (int k = 0; k < n; ++k) {
            const auto j = static_cast<std::size_t>(uniform_int(rng, k, b - 1));
            std::swap(pool[static_cast<std::size_t>(k)], pool[j]);
        }
        std::vector<int> digits(pool.begin(), pool.begin() + n);
        std::sort(digits.begin(), digits.end());
        ps.coords.push_back(DigitSet{b, std::move(digits)});
    }
    return ps;
}

// Random weight vector with deliberate mass on the structured corners:
// exact zeros (prob ~1/5 per entry) and exact ties with earlier entries
// (prob ~1/5 per entry), since those are where argmin bookkeeping can slip.
inline std::vector<double> random_weights(Rng& rng, int d, double t_max = 5.0) {
    std::vector<double> t(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        const double roll = uniform01(rng);
        if (roll < 0.2) {
            t[static_cast<std::size_t>(i)] = 0.0;
        } else if (roll < 0.4 && i > 0) {
            const auto j = static_cast<std::size_t>(uniform_int(rng, 0, i - 1));
            t[static_cast<std::size_t>(i)] = t[j];
        } else {
            t[static_cast<std::size_t>(i)] = uniform(rng, 0.0, t_max);
        }
    }
    return t;
}

} // namespace mdset
