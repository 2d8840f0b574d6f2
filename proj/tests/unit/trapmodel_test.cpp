#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "kproc/kprocess.hpp"
#include "kproc/stats.hpp"
#include "kproc/trapmodel.hpp"

using namespace kproc;

namespace {

// Two-sample Kolmogorov-Smirnov statistic.
double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
  }
  return d;
}

}  // namespace

TEST(SampleTrapEnv, ScalingConstantAndSupport) {
  const TrapEnv t = sample_trap_env(100, AlphaParam(0.5), {40, 0});
  EXPECT_NEAR(t.c_n, 1e-4, 1e-18);
  ASSERT_EQ(t.tau.size(), 100u);
  for (std::size_t i = 0; i < t.n; ++i) {
    EXPECT_GE(t.tau[i], 1.0);
    if (i > 0) EXPECT_LE(t.tau[i], t.tau[i - 1]);
  }
  EXPECT_NO_THROW(validate(t));
  EXPECT_EQ(t, sample_trap_env(100, AlphaParam(0.5), {40, 0}));
  EXPECT_THROW(sample_trap_env(0, AlphaParam(0.5), {40, 0}), std::invalid_argument);
}

TEST(SampleTrapEnv, TopWeightIsFrechet) {
  constexpr int kSeeds = 1000;
  const AlphaParam alpha(0.5);
  std::vector<double> top;
  for (std::uint64_t s = 0; s < kSeeds; ++s) {
    const TrapEnv t = sample_trap_env(10000, alpha, {41, s});
    top.push_back(t.c_n * t.tau[0]);
  }
  const double d = ks_distance(top, [](double w) { return std::exp(-std::pow(w, -0.5)); });
  EXPECT_LT(d, 0.05);
}

// The top three rescaled traps against the top three subordinator jumps,
// compared by two-sample KS at significance 1e-3.
TEST(SampleTrapEnv, TopOrderStatisticsMatchSubordinator) {
  constexpr int kSeeds = 1000;
  const AlphaParam alpha(0.5);
  std::array<std::vector<double>, 3> trap, jumps;
  for (std::uint64_t s = 0; s < kSeeds; ++s) {
    const TrapEnv t = sample_trap_env(10000, alpha, {42, s});
    const Environment g = sample_gamma(alpha, 3, {43, s});
    for (int k = 0; k < 3; ++k) {
      trap[k].push_back(t.c_n * t.tau[k]);
      jumps[k].push_back(g.weights()[k]);
    }
  }
  const double critical = 1.95 * std::sqrt(2.0 / kSeeds);
  for (int k = 0; k < 3; ++k) EXPECT_LT(ks_two_sample(trap[k], jumps[k]), critical) << "rank " << k + 1;
}

TEST(RescaledEnv, Examples) {
  const TrapEnv one{1, AlphaParam(0.4), {3.5}, 1.0};
  const Environment e = rescaled_env(one);
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e.weight(1), 3.5);
  EXPECT_EQ(e.tail_estimate(), 0.0);
  EXPECT_DOUBLE_EQ(e.alpha()->value(), 0.4);
  const TrapEnv t = sample_trap_env(500, AlphaParam(0.5), {44, 0});
  const Environment r = rescaled_env(t);
  for (std::size_t i = 1; i < r.size(); ++i) EXPECT_LE(r.weights()[i], r.weights()[i - 1]);
}

// The expected rescaled mass in (eps, 1] is alpha / (1 - alpha) * (1 - eps^{1-alpha})
// for the Pareto sample (exactly, once eps >= c_n) and for the subordinator.
TEST(RescaledEnv, WindowedMassMatchesSubordinator) {
  const AlphaParam alpha(0.5);
  const double eps = 0.01;
  RunningStats trap_mass, jump_mass;
  for (std::uint64_t s = 0; s < 2000; ++s) {
    const Environment r = rescaled_env(sample_trap_env(10000, alpha, {45, s}));
    const Environment g = sample_gamma(alpha, 200, {46, s});
    double a = 0, b = 0;
    for (double w : r.weights()) a += (w > eps && w <= 1.0) ? w : 0.0;
    for (double w : g.weights()) b += (w > eps && w <= 1.0) ? w : 0.0;
    trap_mass.add(a);
    jump_mass.add(b);
  }
  const double se = std::hypot(trap_mass.std_error(), jump_mass.std_error());
  EXPECT_LT(std::abs(trap_mass.mean() - jump_mass.mean()), 3 * se);
  const double exact = 1.0 * (1.0 - std::sqrt(eps));  // alpha / (1 - alpha) = 1
  EXPECT_LT(std::abs(trap_mass.mean() - exact), 3 * trap_mass.std_error());
}

TEST(SimulateTrap, SingleVertexIsConstant) {
  const TrapEnv one{1, AlphaParam(0.5), {2.0}, 1.0};
  const Trajectory t = simulate_trap(one, State::infinity(), 10.0, {47, 0});
  EXPECT_EQ(t.start_state, State::site(1));
  EXPECT_TRUE(t.events.empty());
  EXPECT_EQ(t.horizon, 10.0);
}

TEST(SimulateTrap, Validation) {
  const TrapEnv t = sample_trap_env(10, AlphaParam(0.5), {48, 0});
  EXPECT_THROW(simulate_trap(t, State::site(11), 1.0, {0, 0}), std::domain_error);
  EXPECT_THROW(simulate_trap(t, State::site(1), 0.0, {0, 0}), std::invalid_argument);
}

TEST(SimulateTrap, MacroscopicSojournsAreExponential) {
  const TrapEnv t = sample_trap_env(6, AlphaParam(0.5), {49, 0});
  const double n = 6.0;
  const Trajectory traj = simulate_trap(t, State::site(1), 1e5 * t.c_n * t.tau[0], {49, 1});
  for (std::size_t x : {1u, 4u}) {
    const auto soj = sojourn_lengths(traj, State::site(x));
    ASSERT_GE(soj.size(), 5000u);
    const double mean = t.c_n * t.tau[x - 1] * n / (n - 1.0);
    const double d = ks_distance(soj, [mean](double v) { return 1.0 - std::exp(-v / mean); });
    EXPECT_GT(ks_pvalue(d, soj.size()), 1e-3) << "x=" << x;
  }
  for (const auto& e : traj.events) ASSERT_LE(e.time, traj.horizon);
}

// Both chains jump uniformly with the same rescaled holding means, so the
// occupied rank at fixed times has the same law exactly.
TEST(SimulateTrap, OccupiedRankMatchesMatchedKProcess) {
  constexpr std::uint64_t kSeeds = 20000;
  const TrapEnv trap = sample_trap_env(50, AlphaParam(0.5), {50, 0});
  const KParams k(rescaled_env(trap), 0.0);
  const std::array<double, 2> times{0.05 * trap.c_n * trap.tau[0], 0.5 * trap.c_n * trap.tau[0]};
  const std::array<std::size_t, 4> top{1, 2, 5, 50};
  std::vector<double> a(8, 0), b(8, 0);
  auto cell = [&](State s) { return std::lower_bound(top.begin(), top.end(), s.index()) - top.begin(); };
  for (std::uint64_t s = 0; s < kSeeds; ++s) {
    const Trajectory y = simulate_trap(trap, State::infinity(), times[1], {51, s});
    const Trajectory x = simulate_k(k, State::infinity(), times[1], {52, s});
    for (std::size_t j = 0; j < 2; ++j) {
      a[j * 4 + cell(state_at(y, times[j]))] += 1;
      b[j * 4 + cell(state_at(x, times[j]))] += 1;
    }
  }
  for (std::size_t c = 0; c < 8; ++c) {
    const double p = a[c] / kSeeds, q = b[c] / kSeeds;
    const double se = std::sqrt((p * (1 - p) + q * (1 - q)) / kSeeds);
    EXPECT_LE(std::abs(p - q), 3 * se + 1e-12) << "cell " << c;
  }
}

TEST(TrapEnvJson, RoundTripAndValidation) {
  const TrapEnv t = sample_trap_env(20, AlphaParam(0.7), {53, 0});
  EXPECT_EQ(trap_env_from_json(trap_env_to_json(t)), t);
  EXPECT_THROW(trap_env_from_json(R"({"n":2,"alpha":0.5,"c_n":0.25,"tau":[1]})"), std::invalid_argument);
  EXPECT_THROW(trap_env_from_json(R"({"n":2,"alpha":0.5,"c_n":0.25,"tau":[1,2]})"), std::invalid_argument);
  EXPECT_THROW(trap_env_from_json("[]"), std::invalid_argument);
}
