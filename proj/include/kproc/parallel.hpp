#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

#include "kproc/random.hpp"

namespace kproc {

/// Worker count for Monte Carlo sharding; 0 means hardware concurrency.
void set_worker_count(unsigned workers);
unsigned worker_count();

/// Replicas per shard. Fixed so that the shard boundaries, and hence the
/// merge order, never depend on the worker count.
inline constexpr std::uint64_t kShardSize = 4096;

/// Runs `body(acc, replica_index, rng)` for every replica in [0, reps), each
/// replica with its own generator `seed.substream(index)`. Per-shard
/// accumulators are merged in shard order with `acc.merge(other)`.
template <class Acc, class Body>
Acc replicate(std::uint64_t reps, const SeedSpec& seed, const Acc& init, Body&& body) {
  const std::uint64_t shards = (reps + kShardSize - 1) / kShardSize;
  std::vector<Acc> partial(shards, init);

  auto run_shard = [&](std::uint64_t shard) {
    const std::uint64_t begin = shard * kShardSize;
    const std::uint64_t end = std::min(reps, begin + kShardSize);
    Acc& acc = partial[shard];
    for (std::uint64_t i = begin; i < end; ++i) {
      CounterRng rng(seed.substream(i));
      body(acc, i, rng);
    }
  };

  const auto workers = static_cast<std::uint64_t>(std::max(1u, worker_count()));
  if (workers == 1 || shards <= 1) {
    for (std::uint64_t s = 0; s < shards; ++s) run_shard(s);
  } else {
    std::vector<std::jthread> pool;
    const std::uint64_t n = std::min(workers, shards);
    pool.reserve(n);
    for (std::uint64_t w = 0; w < n; ++w) {
      pool.emplace_back([&, w] {
        for (std::uint64_t s = w; s < shards; s += n) run_shard(s);
      });
    }
  }

  Acc total = init;
  for (const Acc& p : partial) total.merge(p);
  return total;
}

}  // namespace kproc
