#include "kproc/env.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace kproc {

AlphaParam::AlphaParam(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::domain_error("alpha must lie in the open interval (0, 1), got " +
                            std::to_string(alpha));
  }
}

Environment::Environment(std::vector<double> weights, std::optional<AlphaParam> alpha,
                         double tail_estimate)
    : weights_(std::move(weights)), alpha_(alpha), tail_estimate_(tail_estimate) {
  if (weights_.empty()) throw std::invalid_argument("environment needs at least one weight");
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double w = weights_[i];
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("environment weights must be positive and finite (index " +
                                  std::to_string(i + 1) + ")");
    }
    if (i > 0 && w > weights_[i - 1]) {
      throw std::invalid_argument("environment weights must be nonincreasing (index " +
                                  std::to_string(i + 1) + ")");
    }
  }
  if (!(tail_estimate_ >= 0.0) || !std::isfinite(tail_estimate_)) {
    throw std::invalid_argument("tail_estimate must be finite and nonnegative");
  }
}

double Environment::total_weight() const {
  // Smallest first for accuracy.
  return std::accumulate(weights_.rbegin(), weights_.rend(), 0.0);
}

Environment sample_gamma(AlphaParam alpha, std::size_t n_terms, const SeedSpec& seed) {
  if (n_terms == 0) throw std::invalid_argument("n_terms must be at least 1");
  CounterRng rng(seed);
  const double inv_alpha = 1.0 / alpha.value();
  std::vector<double> weights(n_terms);
  double arrival = 0.0;
  for (auto& w : weights) {
    arrival += rng.exponential(1.0);
    w = std::pow(arrival, -inv_alpha);
  }
  // Arrivals increase strictly, but pow may tie or underflow deep in the tail.
  for (std::size_t i = 1; i < n_terms; ++i) {
    if (weights[i] > weights[i - 1]) weights[i] = weights[i - 1];
    if (!(weights[i] > 0.0)) weights[i] = std::numeric_limits<double>::denorm_min();
  }
  return Environment(std::move(weights), alpha, tail_mass_estimate(alpha, n_terms));
}

double tail_mass_estimate(AlphaParam alpha, std::size_t n_terms) {
  if (n_terms == 0) throw std::invalid_argument("n_terms must be at least 1");
  const double a = alpha.value();
  return a / (1.0 - a) * std::pow(static_cast<double>(n_terms), 1.0 - 1.0 / a);
}

Environment env_from_weights(std::vector<double> weights) {
  std::sort(weights.begin(), weights.end(), std::greater<>());
  return Environment(std::move(weights), std::nullopt, 0.0);
}

std::string env_to_json(const Environment& env) {
  nlohmann::json doc;
  doc["alpha"] = env.alpha() ? nlohmann::json(env.alpha()->value()) : nlohmann::json(nullptr);
  doc["weights"] = std::vector<double>(env.weights().begin(), env.weights().end());
  doc["tail_estimate"] = env.tail_estimate();
  return doc.dump() + "\n";
}

Environment env_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed environment JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("weights") || !doc["weights"].is_array()) {
    throw std::invalid_argument("environment JSON needs a \"weights\" array");
  }
  std::vector<double> weights;
  for (const auto& w : doc["weights"]) {
    if (!w.is_number()) throw std::invalid_argument("environment weights must be numbers");
    weights.push_back(w.get<double>());
  }
  std::optional<AlphaParam> alpha;
  if (doc.contains("alpha") && !doc["alpha"].is_null()) alpha = AlphaParam(doc["alpha"].get<double>());
  const double tail = doc.value("tail_estimate", 0.0);
  return Environment(std::move(weights), alpha, tail);
}

void write_env_file(const Environment& env, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << env_to_json(env);
}

Environment read_env_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return env_from_json(buf.str());
}

}  // namespace kproc
