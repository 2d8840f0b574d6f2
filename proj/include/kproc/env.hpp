#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kproc/random.hpp"

namespace kproc {

/// Tail exponent of the holding-time law, strictly inside (0, 1).
class AlphaParam {
 public:
  /// Throws std::domain_error outside (0, 1).
  explicit AlphaParam(double alpha);
  [[nodiscard]] double value() const { return alpha_; }

  friend bool operator==(const AlphaParam&, const AlphaParam&) = default;

 private:
  double alpha_;
};

/// Ordered positive weights gamma(1) >= gamma(2) >= ... >= gamma(N) together
/// with an estimate of the discarded mass sum_{i > N} gamma(i).
///
/// Immutable once built; every constructor path validates the invariants.
class Environment {
 public:
  /// Throws std::invalid_argument if the weights are empty, nonpositive,
  /// non-finite or not in nonincreasing order, or if the tail estimate is
  /// negative or non-finite.
  Environment(std::vector<double> weights, std::optional<AlphaParam> alpha, double tail_estimate);

  [[nodiscard]] std::span<const double> weights() const { return weights_; }
  [[nodiscard]] std::size_t size() const { return weights_.size(); }
  /// 1-based lookup, matching the state labels of the process.
  [[nodiscard]] double weight(std::size_t site) const { return weights_.at(site - 1); }
  [[nodiscard]] const std::optional<AlphaParam>& alpha() const { return alpha_; }
  [[nodiscard]] double tail_estimate() const { return tail_estimate_; }
  [[nodiscard]] double total_weight() const;

  friend bool operator==(const Environment&, const Environment&) = default;

 private:
  std::vector<double> weights_;
  std::optional<AlphaParam> alpha_;
  double tail_estimate_;
};

/// The n_terms largest jumps of an alpha-stable subordinator on [0, 1]:
/// gamma(i) = G_i^{-1/alpha} with G_i the arrival times of a unit-rate
/// Poisson process. Deterministic in (alpha, n_terms, seed).
Environment sample_gamma(AlphaParam alpha, std::size_t n_terms, const SeedSpec& seed);

/// Expected discarded mass E[sum_{i>N} gamma(i)] from the asymptotic decay
/// gamma(i) ~ i^{-1/alpha}: (alpha / (1 - alpha)) N^{1 - 1/alpha}.
double tail_mass_estimate(AlphaParam alpha, std::size_t n_terms);

/// Sorts into nonincreasing order; tail estimate 0, no alpha.
Environment env_from_weights(std::vector<double> weights);

/// JSON document {"alpha": number|null, "weights": [...], "tail_estimate": number}.
std::string env_to_json(const Environment& env);
Environment env_from_json(const std::string& text);

void write_env_file(const Environment& env, const std::filesystem::path& path);
Environment read_env_file(const std::filesystem::path& path);

}  // namespace kproc
