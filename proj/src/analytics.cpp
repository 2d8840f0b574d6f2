#include "kproc/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace kproc {

namespace {

// Sum smallest terms first; weights are stored largest first.
template <class Term>
double reverse_sum(const Environment& env, Term&& term) {
  const auto w = env.weights();
  double sum = 0.0;
  for (auto it = w.rbegin(); it != w.rend(); ++it) sum += term(*it);
  return sum;
}

double saturation(double r, double g) { return r * g / (1.0 + r * g); }

void check_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::domain_error(std::string(name) + " must be positive");
}

void check_site(const Environment& env, State x) {
  if (!x.is_infinity() && x.index() > env.size()) {
    throw std::domain_error("site " + x.to_string() + " outside the environment");
  }
}

double gamma_of(const Environment& env, State x) { return x.is_infinity() ? 0.0 : env.weight(x.index()); }

}  // namespace

double saturation_sum(const Environment& env, double r) {
  return reverse_sum(env, [r](double g) { return saturation(r, g); });
}

double laplace_exit(double gamma_x, double lambda) {
  check_positive(gamma_x, "gamma_x");
  if (!(lambda >= 0.0)) throw std::domain_error("lambda must be >= 0");
  return 1.0 / (1.0 + lambda * gamma_x);
}

TransformResult entrance_transform(const Environment& env, std::span<const std::size_t> targets,
                                   double lambda, State from, std::span<const double> f) {
  if (targets.empty()) throw std::invalid_argument("target set must be nonempty");
  if (!f.empty() && f.size() != targets.size()) {
    throw std::invalid_argument("f must have one value per target");
  }
  if (!(lambda >= 0.0)) throw std::domain_error("lambda must be >= 0");
  check_site(env, from);
  std::vector<char> member(env.size() + 1, 0);
  for (auto x : targets) {
    if (x < 1 || x > env.size()) throw std::invalid_argument("target index outside the environment");
    if (member[x]) throw std::invalid_argument("duplicate target index");
    member[x] = 1;
  }
  if (!from.is_infinity() && member[from.index()]) {
    throw std::invalid_argument("start must lie outside the target set");
  }

  double outside = 0.0;
  for (std::size_t x = env.size(); x >= 1; --x) {
    if (!member[x]) outside += saturation(lambda, env.weight(x));
  }
  const double factor = 1.0 + lambda * gamma_of(env, from);
  double f_sum = 0.0;
  if (f.empty()) {
    f_sum = static_cast<double>(targets.size());
  } else {
    for (double v : f) f_sum += v;
  }
  const double denom = static_cast<double>(targets.size()) + factor * outside;
  return {f_sum / denom, factor * lambda * env.tail_estimate()};
}

TransformResult green(const Environment& env, double c, double lambda, State x) {
  check_positive(lambda, "lambda");
  if (!(c >= 0.0)) throw std::domain_error("c must be >= 0");
  check_site(env, x);
  const double denom = c * lambda + saturation_sum(env, lambda);
  const double numer = x.is_infinity() ? c * lambda : saturation(lambda, env.weight(x.index()));
  return {numer / denom, lambda * env.tail_estimate()};
}

TransformResult green_xy(const Environment& env, double c, double lambda, State x, State y) {
  check_site(env, y);
  TransformResult g = green(env, c, lambda, x);
  g.value /= 1.0 + lambda * gamma_of(env, y);
  return g;
}

TransformResult corr_transform(const Environment& env, double lambda, double mu) {
  check_positive(lambda, "lambda");
  check_positive(mu, "mu");
  const double numer = reverse_sum(env, [&](double g) { return saturation(lambda, g) * saturation(mu, g); });
  const double denom = saturation_sum(env, lambda);
  const double last = env.weights().back();
  const double bound = std::max(lambda, lambda * mu * last) * env.tail_estimate();
  return {numer / denom, bound};
}

TransformResult first_hit_transform(const Environment& env, double c, std::size_t x, double lambda) {
  if (x < 1 || x > env.size()) throw std::domain_error("site outside the environment");
  if (!(lambda >= 0.0)) throw std::domain_error("lambda must be >= 0");
  if (!(c >= 0.0)) throw std::domain_error("c must be >= 0");
  double others = 0.0;
  for (std::size_t y = env.size(); y >= 1; --y) {
    if (y != x) others += saturation(lambda, env.weight(y));
  }
  return {1.0 / (1.0 + c * lambda + others), lambda * env.tail_estimate()};
}

TransformResult omega(const Environment& env, int i, int j, double r) {
  if (i != 0 && i != 1) throw std::domain_error("omega: i must be 0 or 1");
  if (j != 1 && j != 2) throw std::domain_error("omega: j must be 1 or 2");
  check_positive(r, "r");
  double sum = 0.0;
  for (std::size_t x = env.size(); x > static_cast<std::size_t>(i); --x) sum += saturation(r, env.weight(x));
  return {std::pow(1.0 + sum, -j), r * env.tail_estimate()};
}

}  // namespace kproc
