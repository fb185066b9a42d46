#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace perc {

// Deterministic sharded Monte Carlo driver. The index range [0, n) is split
// into a fixed number of shards (independent of the worker count), workers
// process whole shards, and results are merged in shard order, so the output
// is bit-identical for any number of workers.
constexpr int kShardCount = 64;

struct ShardRange {
    uint64_t begin = 0, end = 0;
};

inline ShardRange shard_range(uint64_t n, int shard) {
    uint64_t b = n * (uint64_t)shard / kShardCount;
    uint64_t e = n * (uint64_t)(shard + 1) / kShardCount;
    return {b, e};
}

// Accum must be default-constructible; body(shard_accum, index) adds one
// sample; merge(total, shard_accum) folds in shard order.
template <class Accum, class Body, class Merge>
inline Accum run_sharded(uint64_t n, int workers, Body&& body, Merge&& merge) {
    if (workers < 1) workers = 1;
    std::vector<Accum> parts(kShardCount);
    std::atomic<int> next{0};
    auto work = [&]() {
        for (;;) {
            int s = next.fetch_add(1);
            if (s >= kShardCount) return;
            ShardRange r = shard_range(n, s);
            Accum acc;
            for (uint64_t i = r.begin; i < r.end; ++i) body(acc, i);
            parts[s] = std::move(acc);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    Accum total;
    for (int s = 0; s < kShardCount; ++s) merge(total, parts[s]);
    return total;
}

} // namespace perc
