#include "kproc/quadrature.hpp"

#include <cmath>
#include <queue>
#include <vector>

namespace kproc::quad {

namespace {

// Kronrod abscissae (positive half) and weights; odd indices carry the
// embedded 7-point Gauss rule.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double a, b, value, error;
  bool operator<(const Piece& o) const { return error < o.error; }
};

Piece kronrod(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod_sum = fc * kWgk[7];
  double gauss_sum = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod_sum += kWgk[j] * pair;
    if (j % 2 == 1) gauss_sum += kWg[j / 2] * pair;
  }
  const double value = kronrod_sum * half;
  const double error = std::abs((kronrod_sum - gauss_sum) * half);
  return {a, b, value, error};
}

}  // namespace

QuadResult integrate(const Integrand& f, double a, double b, const Tolerance& tol) {
  if (a == b) return {0.0, 0.0, 0, true};
  std::priority_queue<Piece> pieces;
  Piece first = kronrod(f, a, b);
  double value = first.value;
  double error = first.error;
  pieces.push(first);
  int evaluations = 15;
  int intervals = 1;
  while (error > std::max(tol.abs, tol.rel * std::abs(value)) && intervals < tol.max_intervals) {
    const Piece worst = pieces.top();
    pieces.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) break;  // no more resolution
    const Piece left = kronrod(f, worst.a, mid);
    const Piece right = kronrod(f, mid, worst.b);
    evaluations += 30;
    ++intervals;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    pieces.push(left);
    pieces.push(right);
  }
  // Re-sum to shed the drift of the running updates.
  value = 0.0;
  error = 0.0;
  while (!pieces.empty()) {
    value += pieces.top().value;
    error += pieces.top().error;
    pieces.pop();
  }
  return {value, error, evaluations, error <= std::max(tol.abs, tol.rel * std::abs(value))};
}

QuadResult integrate_left_power(const Integrand& f, double a, double h, double p, const Tolerance& tol) {
  const double q = 1.0 / (p + 1.0);
  return integrate([&](double u) { return f(a + h * std::pow(u, q)) * h * q * std::pow(u, q - 1.0); }, 0.0,
                   1.0, tol);
}

QuadResult integrate_right_power(const Integrand& f, double b, double h, double p, const Tolerance& tol) {
  const double q = 1.0 / (p + 1.0);
  return integrate([&](double u) { return f(b - h * std::pow(u, q)) * h * q * std::pow(u, q - 1.0); }, 0.0,
                   1.0, tol);
}

QuadResult integrate_to_infinity(const Integrand& f, double a, const Tolerance& tol) {
  return integrate(
      [&](double u) {
        const double one_minus = 1.0 - u;
        return f(a + u / one_minus) / (one_minus * one_minus);
      },
      0.0, 1.0, tol);
}

QuadResult integrate_half_line(const Integrand& f, double p0, double pinf, const Tolerance& tol) {
  const QuadResult near = integrate_left_power(f, 0.0, 1.0, p0, tol);
  const QuadResult far = integrate_left_power([&](double v) { return f(1.0 / v) / (v * v); }, 0.0, 1.0,
                                              pinf - 1.0, tol);
  return {near.value + far.value, near.error + far.error, near.evaluations + far.evaluations,
          near.converged && far.converged};
}

}  // namespace kproc::quad
