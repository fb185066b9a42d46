#pragma once

#include <cstdint>

namespace perc {

// 64-bit finalizer (Stafford mix13). Full avalanche, cheap enough to be
// recomputed per site query instead of caching.
inline uint64_t mix64(uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
}

// Counter-based site randomness: the color of a site is a pure function of
// (seed, sample_index, q, r). No stream state, so shards can be evaluated in
// any order and lazy algorithms can query single sites on demand.
class SiteRng {
public:
    SiteRng(uint64_t seed, uint64_t sample_index)
        : base_(mix64(seed + 0x9e3779b97f4a7c15ull * (sample_index + 1))) {}

    uint64_t bits(int32_t q, int32_t r) const {
        uint64_t h = mix64(base_ ^ (uint64_t)(int64_t)r * 0xd1342543de82ef95ull);
        return mix64(h ^ (uint64_t)(int64_t)q * 0xaf251af3b0f025b5ull);
    }

    // open = true with probability 1/2
    bool open(int32_t q, int32_t r) const { return bits(q, r) >> 63; }

    // row-major fast path: hoist the row mix out of inner loops
    uint64_t row_key(int32_t r) const {
        return mix64(base_ ^ (uint64_t)(int64_t)r * 0xd1342543de82ef95ull);
    }
    static bool open_in_row(uint64_t row_key, int32_t q) {
        return mix64(row_key ^ (uint64_t)(int64_t)q * 0xaf251af3b0f025b5ull) >> 63;
    }

private:
    uint64_t base_;
};

// Small sequential generator for auxiliary randomness (bootstrap resampling,
// test data). Not used for percolation configurations.
class SplitMix {
public:
    explicit SplitMix(uint64_t seed) : state_(seed) {}
    uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix64(state_);
    }
    double uniform() { return (next() >> 11) * 0x1.0p-53; }
    // uniform integer in [0, n)
    uint64_t below(uint64_t n) { return next() % n; }

private:
    uint64_t state_;
};

} // namespace perc
