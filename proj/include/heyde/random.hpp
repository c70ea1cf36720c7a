#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "heyde/group.hpp"

namespace heyde {

/// mt19937_64 output is fixed by the standard; the helpers below avoid the
/// implementation-defined std distributions so streams are portable.
using Rng = std::mt19937_64;

/// Uniform integer in [0, n).
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    const std::uint64_t limit = Rng::max() - (Rng::max() % n);
    std::uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return r % n;
}

/// Uniform integer in [lo, hi].
inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

/// Uniform double in [0, 1) with 53 random bits.
inline double unit_double(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// k distinct indices from [0, n), sorted.
inline std::vector<std::int64_t> random_subset(Rng& rng, std::int64_t n, std::int64_t k) {
    std::vector<std::int64_t> pool(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
    for (std::int64_t i = 0; i < k; ++i) {
        const auto j = static_cast<std::size_t>(uniform_int(rng, i, n - 1));
        std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    }
    pool.resize(static_cast<std::size_t>(k));
    std::sort(pool.begin(), pool.end());
    return pool;
}

/// Random endomorphism: each entry a_ij is a random multiple of
/// n_i / gcd(n_i, n_j), which is exactly the compatible set.
inline Endomorphism random_endomorphism(const FiniteAbelianGroup& g, Rng& rng) {
    const auto& n = g.cyclic_orders();
    IntMatrix m(n.size(), std::vector<std::int64_t>(n.size(), 0));
    for (std::size_t i = 0; i < n.size(); ++i)
        for (std::size_t j = 0; j < n.size(); ++j) {
            const std::int64_t step = n[i] / std::gcd(n[i], n[j]);
            m[i][j] = step * uniform_int(rng, 0, n[i] / step - 1);
        }
    return Endomorphism(g, std::move(m));
}

/// Rejection-samples random_endomorphism until it is bijective.
inline Endomorphism random_automorphism(const FiniteAbelianGroup& g, Rng& rng) {
    for (;;) {
        Endomorphism a = random_endomorphism(g, rng);
        if (a.is_auto()) return a;
    }
}

}  // namespace heyde
