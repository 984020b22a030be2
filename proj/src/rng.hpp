#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace pushlex {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Named substreams: every consumer of randomness inside a run derives its own
// seed from (master, tag, a, b), so results do not depend on evaluation order
// or scheduling.
enum class Stream : std::uint64_t {
    cases = 1,
    init = 2,
    subsample = 3,
    selection = 4,
    mutation = 5,
    simplify = 6,
};

inline std::uint64_t substream_seed(std::uint64_t master, Stream tag, std::uint64_t a = 0,
                                    std::uint64_t b = 0) {
    std::uint64_t h = splitmix64(master ^ 0x6a09e667f3bcc909ULL);
    h = splitmix64(h ^ splitmix64(static_cast<std::uint64_t>(tag)));
    h = splitmix64(h ^ splitmix64(a));
    h = splitmix64(h ^ splitmix64(b));
    return h;
}

inline Rng substream(std::uint64_t master, Stream tag, std::uint64_t a = 0, std::uint64_t b = 0) {
    return Rng(substream_seed(master, tag, a, b));
}

// Unbiased integer in [0, n). n must be > 0.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - //
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    return static_cast<std::size_t>(uniform_below(rng, n));
}

inline std::int64_t uniform_int_in(Rng& rng, std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    uniform_below(rng, static_cast<std::uint64_t>(hi - lo) + 1));
}

inline double uniform_real_01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real_in(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform_real_01(rng);
}

inline bool bernoulli(Rng& rng, double p) { return uniform_real_01(rng) < p; }

// In-place Fisher-Yates shuffle.
template <typename T>
void fisher_yates_shuffle(std::vector<T>& items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = uniform_index(rng, i);
        std::swap(items[i - 1], items[j]);
    }
}

// Sample `k` distinct indices from [0, n), returned in ascending order.
inline std::vector<std::size_t> sample_indices(Rng& rng, std::size_t n, std::size_t k) {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
        std::size_t j = i + uniform_index(rng, n - i);
        std::swap(all[i], all[j]);
    }
    all.resize(k < n ? k : n);
    std::sort(all.begin(), all.end());
    return all;
}

} // namespace pushlex
