#pragma once

#include <functional>

namespace kproc::quad {

using Integrand = std::function<double(double)>;

struct Tolerance {
  double rel = 1e-10;
  double abs = 1e-14;
  int max_intervals = 2000;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Globally adaptive Gauss-Kronrod (7/15) on a finite interval [a, b]: the
/// interval with the largest error estimate is bisected until the summed
/// error drops below max(abs, rel * |value|).
QuadResult integrate(const Integrand& f, double a, double b, const Tolerance& tol = {});

/// Integral over [a, a + h] of f where f(a + x) ~ x^p near the left end
/// (p > -1). The substitution x = h u^{1/(p+1)} flattens the algebraic
/// endpoint behaviour before the adaptive rule sees it.
QuadResult integrate_left_power(const Integrand& f, double a, double h, double p, const Tolerance& tol = {});

/// Same, singular at the right end b: f(b - x) ~ x^p.
QuadResult integrate_right_power(const Integrand& f, double b, double h, double p, const Tolerance& tol = {});

/// Integral over [a, inf) via w = a + u / (1 - u).
QuadResult integrate_to_infinity(const Integrand& f, double a, const Tolerance& tol = {});

/// Integral over (0, inf) of f with f(w) ~ w^{p0} at 0 and ~ w^{-1-pinf} at
/// infinity (pinf > 0 for a power tail; pass 0 for tails that decay faster).
/// Splits at 1; near 0 the power substitution, beyond 1 the map w = 1/v with
/// its own power substitution.
QuadResult integrate_half_line(const Integrand& f, double p0, double pinf, const Tolerance& tol = {});

}  // namespace kproc::quad
