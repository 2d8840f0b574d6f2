#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "kproc/random.hpp"
#include "kproc/stats.hpp"

using kproc::CounterRng;
using kproc::SeedSpec;

// Known-answer vector for Philox4x32-10 with zero counter and zero key.
TEST(Philox, KnownAnswerZero) {
  const auto out = CounterRng::philox({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out[0], 0x6627e8d5u);
  EXPECT_EQ(out[1], 0xe169c58du);
  EXPECT_EQ(out[2], 0xbc57ac4cu);
  EXPECT_EQ(out[3], 0x9b00dbd8u);
}

// Known-answer vector with all-ones counter and key.
TEST(Philox, KnownAnswerOnes) {
  const auto out = CounterRng::philox({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                      {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(out[0], 0x408f276du);
  EXPECT_EQ(out[1], 0x41c83b0eu);
  EXPECT_EQ(out[2], 0xa20bc7c6u);
  EXPECT_EQ(out[3], 0x6d5451fdu);
}

TEST(CounterRng, EqualSpecsReproduce) {
  CounterRng a({42, 7}), b({42, 7});
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
}

TEST(CounterRng, DistinctSpecsDiffer) {
  std::set<std::uint64_t> first;
  for (std::uint64_t s = 0; s < 50; ++s) {
    for (std::uint64_t st = 0; st < 50; ++st) first.insert(CounterRng({s, st})());
  }
  EXPECT_EQ(first.size(), 2500u);
}

TEST(SeedSpec, SubstreamsAreDistinctAndStable) {
  const SeedSpec parent{9, 3};
  EXPECT_EQ(parent.substream(5), parent.substream(5));
  EXPECT_NE(parent.substream(5), parent.substream(6));
  EXPECT_NE(parent.substream(5), (SeedSpec{9, 4}).substream(5));
}

TEST(CounterRng, UniformMomentsAndRange) {
  CounterRng rng({1, 0});
  kproc::RunningStats s;
  for (int i = 0; i < 200000; ++i) {
    const double u = rng.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    s.add(u);
  }
  EXPECT_LT(std::abs(s.mean() - 0.5), 4 * s.std_error());
  EXPECT_NEAR(s.variance(), 1.0 / 12.0, 2e-3);
}

TEST(CounterRng, ExponentialMean) {
  CounterRng rng({2, 0});
  kproc::RunningStats s;
  for (int i = 0; i < 200000; ++i) s.add(rng.exponential(2.5));
  EXPECT_LT(std::abs(s.mean() - 2.5), 4 * s.std_error());
  EXPECT_EQ(rng.exponential(0.0), 0.0);
}

TEST(CounterRng, IndexIsUniform) {
  CounterRng rng({3, 0});
  std::vector<std::uint64_t> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto k = rng.index(7);
    ASSERT_LT(k, 7u);
    ++counts[k];
  }
  const double stat = kproc::chi_square_uniform(counts);
  EXPECT_GT(kproc::chi_square_survival(stat, 6), 1e-3);
}
