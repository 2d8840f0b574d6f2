#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "kproc/random.hpp"
#include "kproc/stats.hpp"

using namespace kproc;

TEST(RunningStats, MatchesTwoPass) {
  const std::vector<double> xs{1.5, -2.0, 3.25, 0.0, 7.0, 4.5};
  RunningStats s;
  for (double x : xs) s.add(x);
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= xs.size();
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  EXPECT_NEAR(s.mean(), mean, 1e-14);
  EXPECT_NEAR(s.variance(), ss / (xs.size() - 1), 1e-13);
  EXPECT_EQ(s.count(), xs.size());
}

TEST(RunningStats, MergeEqualsSequential) {
  CounterRng rng({5, 0});
  RunningStats all, left, right;
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.exponential(1.0);
    all.add(x);
    (i < 377 ? left : right).add(x);
  }
  left.merge(right);
  EXPECT_EQ(left.count(), all.count());
  EXPECT_NEAR(left.mean(), all.mean(), 1e-13);
  EXPECT_NEAR(left.variance(), all.variance(), 1e-12);
}

TEST(RunningStats, MergeWithEmpty) {
  RunningStats a, empty;
  a.add(2.0);
  a.add(4.0);
  a.merge(empty);
  EXPECT_EQ(a.count(), 2u);
  EXPECT_DOUBLE_EQ(a.mean(), 3.0);
  empty.merge(a);
  EXPECT_DOUBLE_EQ(empty.mean(), 3.0);
}

TEST(McEstimate, ZScore) {
  const McEstimate e{1.0, 0.5, 10};
  EXPECT_DOUBLE_EQ(e.z_score(2.0), 2.0);
  const McEstimate exact{1.0, 0.0, 10};
  EXPECT_EQ(exact.z_score(1.0), 0.0);
}

TEST(Ks, ExactQuantilesHaveSmallDistance) {
  std::vector<double> q;
  for (int i = 0; i < 1000; ++i) q.push_back((i + 0.5) / 1000.0);
  EXPECT_NEAR(ks_distance(q, [](double x) { return x; }), 0.0005, 1e-12);
}

TEST(Ks, KolmogorovSurvivalKnownValues) {
  // Classical table values of the Kolmogorov distribution.
  EXPECT_NEAR(kolmogorov_survival(1.36), 0.0494, 5e-4);
  EXPECT_NEAR(kolmogorov_survival(1.63), 0.0098, 3e-4);
  EXPECT_NEAR(kolmogorov_survival(0.0), 1.0, 1e-12);
}

TEST(ChiSquare, SurvivalTwoDof) {
  // With 2 degrees of freedom the survival function is exp(-x/2).
  for (double x : {0.5, 2.0, 9.0}) EXPECT_NEAR(chi_square_survival(x, 2), std::exp(-x / 2), 1e-13);
}

TEST(ChiSquare, UniformStatistic) {
  const std::vector<std::uint64_t> counts{10, 20, 30};
  // Expected 20 per cell: (100 + 0 + 100) / 20.
  EXPECT_DOUBLE_EQ(chi_square_uniform(counts), 10.0);
}
