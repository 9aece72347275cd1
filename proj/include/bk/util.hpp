#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bk {

// Subsets of a ground set with <= 25 elements are bitmasks.
using Mask = std::uint32_t;

inline int popcount(Mask m) { return std::popcount(m); }

inline Mask bit(int i) { return Mask{1} << i; }

inline bool contains(Mask m, int i) { return (m >> i) & 1u; }

inline Mask full_mask(int n) { return n == 0 ? 0u : (Mask{1} << n) - 1u; }

// Lowest set bit index; m must be nonzero.
inline int first_element(Mask m) { return std::countr_zero(m); }

inline std::vector<int> elements_of(Mask m) {
    std::vector<int> out;
    while (m) {
        int i = std::countr_zero(m);
        out.push_back(i);
        m &= m - 1;
    }
    return out;
}

// Next k-subset in colex order (Gosper's hack). Returns 0 when exhausted
// relative to `limit` (the full mask).
inline Mask next_subset_same_size(Mask m, Mask limit) {
    if (m == 0) return 0;
    Mask c = m & (~m + 1);
    Mask r = m + c;
    Mask next = (((r ^ m) >> 2) / c) | r;
    return next > limit ? 0 : next;
}

inline Mask first_subset_of_size(int k) { return full_mask(k); }

// Enumerate all subsets of `superset` (including empty and full).
template <typename F>
void for_each_subset(Mask superset, F&& fn) {
    Mask s = superset;
    while (true) {
        fn(s);
        if (s == 0) break;
        s = (s - 1) & superset;
    }
}

inline long long binomial(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    long long r = 1;
    for (long long i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

// Deterministic small PRNG (splitmix64) for sampling; never seeded from time.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    // Uniform in [lo, hi], hi >= lo.
    long long range(long long lo, long long hi) {
        return lo + static_cast<long long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }
};

}  // namespace bk
