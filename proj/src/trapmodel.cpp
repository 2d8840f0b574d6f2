#include "kproc/trapmodel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include <json.hpp>

namespace kproc {

TrapEnv sample_trap_env(std::size_t n, AlphaParam alpha, const SeedSpec& seed) {
  if (n == 0) throw std::invalid_argument("n must be at least 1");
  CounterRng rng(seed);
  const double inv_alpha = 1.0 / alpha.value();
  std::vector<double> tau(n);
  for (auto& t : tau) t = std::pow(rng.uniform(), -inv_alpha);
  std::sort(tau.begin(), tau.end(), std::greater<>());
  return TrapEnv{n, alpha, std::move(tau), std::pow(static_cast<double>(n), -inv_alpha)};
}

void validate(const TrapEnv& trap) {
  if (trap.n == 0 || trap.tau.size() != trap.n) {
    throw std::invalid_argument("tau must hold exactly n entries");
  }
  for (std::size_t i = 0; i < trap.n; ++i) {
    if (!(trap.tau[i] > 0.0) || !std::isfinite(trap.tau[i])) {
      throw std::invalid_argument("tau entries must be positive and finite");
    }
    if (i > 0 && trap.tau[i] > trap.tau[i - 1]) throw std::invalid_argument("tau must be nonincreasing");
  }
  if (!(trap.c_n > 0.0) || !std::isfinite(trap.c_n)) throw std::invalid_argument("c_n must be positive");
}

Environment rescaled_env(const TrapEnv& trap) {
  std::vector<double> w(trap.tau.size());
  std::transform(trap.tau.begin(), trap.tau.end(), w.begin(), [&](double t) { return trap.c_n * t; });
  return Environment(std::move(w), trap.alpha, 0.0);
}

Trajectory simulate_trap(const TrapEnv& trap, State start, double horizon, const SeedSpec& seed) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("horizon must be positive and finite");
  }
  if (!start.is_infinity() && start.index() > trap.n) {
    throw std::domain_error("start vertex beyond n");
  }
  // Simulate in microscopic time, then rescale the clock.
  Trajectory traj = simulate_chain(trap.tau, 0.0, start, horizon / trap.c_n, seed);
  for (auto& e : traj.events) e.time *= trap.c_n;
  traj.horizon = horizon;
  // Rounding can push the last event just past the macroscopic horizon.
  while (!traj.events.empty() && traj.events.back().time > horizon) traj.events.pop_back();
  return traj;
}

std::string trap_env_to_json(const TrapEnv& trap) {
  nlohmann::json doc;
  doc["n"] = trap.n;
  doc["alpha"] = trap.alpha.value();
  doc["c_n"] = trap.c_n;
  doc["tau"] = trap.tau;
  return doc.dump() + "\n";
}

TrapEnv trap_env_from_json(const std::string& text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    TrapEnv trap{doc.at("n").get<std::size_t>(), AlphaParam(doc.at("alpha").get<double>()),
                 doc.at("tau").get<std::vector<double>>(), doc.at("c_n").get<double>()};
    validate(trap);
    return trap;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed trap environment JSON: ") + e.what());
  }
}

}  // namespace kproc
