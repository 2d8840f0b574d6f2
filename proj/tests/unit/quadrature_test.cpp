#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "kproc/quadrature.hpp"

using namespace kproc::quad;

TEST(Quadrature, PolynomialIsExact) {
  const auto r = integrate([](double x) { return 3 * x * x - x + 2; }, -1.0, 2.0);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 9.0 - 1.5 + 6.0, 1e-13);
}

TEST(Quadrature, EmptyInterval) { EXPECT_EQ(integrate([](double) { return 1.0; }, 2.0, 2.0).value, 0.0); }

TEST(Quadrature, OscillatoryNeedsRefinement) {
  const auto r = integrate([](double x) { return std::sin(50 * x); }, 0.0, 1.0);
  EXPECT_NEAR(r.value, (1 - std::cos(50.0)) / 50.0, 1e-12);
  EXPECT_GT(r.evaluations, 15);
}

TEST(Quadrature, LeftEndpointSingularity) {
  const auto r = integrate_left_power([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, -0.5);
  EXPECT_NEAR(r.value, 2.0, 1e-12);
  const auto s = integrate_left_power([](double x) { return std::pow(x, -0.9); }, 0.0, 1.0, -0.9);
  EXPECT_NEAR(s.value, 10.0, 1e-9);
}

TEST(Quadrature, RightEndpointSingularity) {
  // 2 - x cancels near the endpoint, which limits the attainable accuracy.
  const auto r = integrate_right_power([](double x) { return std::pow(2.0 - x, -0.7); }, 2.0, 1.0, -0.7);
  EXPECT_NEAR(r.value, 1.0 / 0.3, 1e-9);
}

TEST(Quadrature, ToInfinity) {
  EXPECT_NEAR(integrate_to_infinity([](double x) { return std::exp(-x); }, 1.0).value, std::exp(-1.0), 1e-12);
}

TEST(Quadrature, HalfLine) {
  EXPECT_NEAR(integrate_half_line([](double x) { return std::exp(-x); }, 0.0, 1.0).value, 1.0, 1e-12);
  for (double a : {0.2, 0.5, 0.9}) {
    const auto r = integrate_half_line([a](double w) { return std::pow(w, -a) / (1 + w); }, -a, a);
    EXPECT_NEAR(r.value, std::numbers::pi / std::sin(std::numbers::pi * a), 1e-9) << "a=" << a;
  }
}
