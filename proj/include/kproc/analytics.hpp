#pragma once

#include <span>

#include "kproc/env.hpp"
#include "kproc/kprocess.hpp"

namespace kproc {

/// A closed-form value with a bound on what the discarded environment tail
/// (sum_{i>N} gamma(i), as recorded by the environment) could add to the
/// infinite sum it contains.
struct TransformResult {
  double value = 0.0;
  double truncation_error_bound = 0.0;
};

/// E_x[exp(-lambda tau_x)] = 1 / (1 + lambda gamma(x)); also the law of the
/// first visit to infinity from x.
double laplace_exit(double gamma_x, double lambda);

/// E_y[f(X(tau^A)) exp(-lambda tau^A)] for the entrance into the finite set A.
/// `from` is infinity or a site outside A. With `f` empty the test function is
/// f = 1 on A; otherwise `f` holds one value per element of `targets`, in order.
/// Throws std::invalid_argument for an empty A, a start inside A, or a size
/// mismatch between `f` and `targets`.
TransformResult entrance_transform(const Environment& env, std::span<const std::size_t> targets,
                                   double lambda, State from, std::span<const double> f = {});

/// Green kernel g_lambda^c(x) = lambda * int e^{-lambda s} P_inf(X(s) = x) ds.
/// For x = infinity returns c lambda / (c lambda + sum), which is 0 when c = 0.
TransformResult green(const Environment& env, double c, double lambda, State x);

/// g_lambda^c(x, y) = g_lambda^c(x) / (1 + lambda gamma(y)), gamma(inf) = 0.
TransformResult green_xy(const Environment& env, double c, double lambda, State x, State y);

/// Correlation transform c_lambda(mu), the double Laplace transform of the
/// probability that the path stays put on [s, s + t].
TransformResult corr_transform(const Environment& env, double lambda, double mu);

/// E_inf[exp(-lambda tau^{x})] = (1 + c lambda + sum_{y != x} lambda g_y / (1 + lambda g_y))^{-1}.
TransformResult first_hit_transform(const Environment& env, double c, std::size_t x, double lambda);

/// omega_ij(r) = (1 + sum_{x != i} r g_x / (1 + r g_x))^{-j}; i = 0 excludes nothing.
TransformResult omega(const Environment& env, int i, int j, double r);

/// sum_x r gamma(x) / (1 + r gamma(x)) over the whole truncated environment.
double saturation_sum(const Environment& env, double r);

}  // namespace kproc
