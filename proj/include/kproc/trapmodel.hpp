#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "kproc/env.hpp"
#include "kproc/kprocess.hpp"
#include "kproc/random.hpp"

namespace kproc {

/// Pareto(alpha) mean holding times of the trap model on n vertices, in
/// nonincreasing order, with the time scale c_n = n^{-1/alpha}.
struct TrapEnv {
  std::size_t n;
  AlphaParam alpha;
  std::vector<double> tau;
  double c_n;

  friend bool operator==(const TrapEnv&, const TrapEnv&) = default;
};

/// n i.i.d. draws with P(tau > t) = t^{-alpha} for t >= 1, sorted
/// nonincreasing. Throws std::invalid_argument for n = 0.
TrapEnv sample_trap_env(std::size_t n, AlphaParam alpha, const SeedSpec& seed);

/// Checks the TrapEnv invariants; throws std::invalid_argument.
void validate(const TrapEnv& trap);

/// Weights c_n * tau[i], tail estimate 0.
Environment rescaled_env(const TrapEnv& trap);

/// The trap chain (hold Exp(mean tau_i), then jump uniformly over all n
/// vertices) observed in macroscopic time t = c_n * (microscopic time).
/// `start` is a vertex, or State::infinity() for a uniform start.
/// `horizon` is macroscopic. Throws std::domain_error for a start beyond n.
Trajectory simulate_trap(const TrapEnv& trap, State start, double horizon, const SeedSpec& seed);

std::string trap_env_to_json(const TrapEnv& trap);
TrapEnv trap_env_from_json(const std::string& text);

}  // namespace kproc
