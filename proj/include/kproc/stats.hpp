#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace kproc {

/// Mergeable (count, mean, M2) accumulator. Merging in a fixed order gives
/// bit-identical results regardless of how replicas were sharded.
class RunningStats {
 public:
  void add(double x);
  void merge(const RunningStats& other);

  [[nodiscard]] std::uint64_t count() const { return count_; }
  [[nodiscard]] double mean() const { return mean_; }
  [[nodiscard]] double variance() const;  // unbiased sample variance
  [[nodiscard]] double std_error() const;

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Monte Carlo point estimate with its standard error.
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t count = 0;

  static McEstimate from(const RunningStats& s) { return {s.mean(), s.std_error(), s.count()}; }
  /// |mean - target| measured in standard errors (0/0 counts as 0).
  [[nodiscard]] double z_score(double target) const;
};

/// Sup distance between the empirical CDF of `samples` and `cdf`.
template <class Cdf>
double ks_distance(std::vector<double> samples, Cdf&& cdf);

/// Asymptotic Kolmogorov survival function Q(x) = P(sqrt(n) D_n > x).
double kolmogorov_survival(double x);

/// p-value of a one-sample KS statistic `d` on `n` samples (asymptotic, with
/// the Stephens small-sample correction).
double ks_pvalue(double d, std::size_t n);

/// Pearson chi-square statistic for counts against equal cell probabilities.
double chi_square_uniform(std::span<const std::uint64_t> counts);

/// Upper tail of the chi-square distribution with `dof` degrees of freedom.
double chi_square_survival(double statistic, double dof);

template <class Cdf>
double ks_distance(std::vector<double> samples, Cdf&& cdf) {
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    const auto di = static_cast<double>(i);
    d = std::max({d, (di + 1.0) / n - f, f - di / n});
  }
  return d;
}

}  // namespace kproc
