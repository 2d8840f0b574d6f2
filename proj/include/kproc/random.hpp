#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace kproc {

/// Reproducible randomness key. Equal pairs give bit-identical draws;
/// distinct pairs give independent streams.
struct SeedSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  /// Child spec for replica `index`, keyed by a hash of (seed, stream) so that
  /// substreams of distinct parents never collide in practice.
  [[nodiscard]] SeedSpec substream(std::uint64_t index) const;

  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Philox4x32-10 counter-based generator. The 64-bit key is derived from the
/// seed and the 128-bit counter starts at (stream, 0), so every (seed, stream)
/// addresses its own disjoint sequence.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(const SeedSpec& spec);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on the open interval (0, 1), 53 bits of resolution.
  double uniform();
  /// Exponential variate with the given mean (mean 0 returns 0).
  double exponential(double mean);
  /// Uniform integer in [0, n). Unbiased (Lemire's multiply-shift with rejection).
  std::uint64_t index(std::uint64_t n);

  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;
  static Block philox(Block counter, Key key);

 private:
  void refill();

  Key key_{};
  Block counter_{};
  Block buffer_{};
  int used_ = 4;
};

}  // namespace kproc
