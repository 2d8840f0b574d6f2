#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kproc/env.hpp"
#include "kproc/random.hpp"
#include "kproc/stats.hpp"

namespace kproc {

/// A site label in {1, ..., n} or the unstable point at infinity.
class State {
 public:
  static constexpr State infinity() { return State(0); }
  /// Throws std::domain_error for index 0.
  static State site(std::size_t index);

  [[nodiscard]] constexpr bool is_infinity() const { return value_ == 0; }
  /// 1-based site index; undefined for infinity.
  [[nodiscard]] constexpr std::size_t index() const { return value_; }

  /// "inf" or the decimal index.
  [[nodiscard]] std::string to_string() const;
  /// Accepts "inf" or a positive integer.
  static State parse(const std::string& token);

  friend constexpr bool operator==(State, State) = default;

 private:
  constexpr explicit State(std::size_t v) : value_(v) {}
  std::size_t value_;
};

/// Environment, infinity-holding parameter c >= 0 and truncation level n.
class KParams {
 public:
  /// n defaults to the environment length. Throws std::domain_error for c < 0
  /// or n outside [1, env.size()].
  explicit KParams(Environment env, double c = 0.0, std::optional<std::size_t> n = std::nullopt);

  [[nodiscard]] const Environment& env() const { return env_; }
  [[nodiscard]] double c() const { return c_; }
  [[nodiscard]] std::size_t n() const { return n_; }
  /// The n weights actually used by the truncated chain.
  [[nodiscard]] std::span<const double> weights() const { return env_.weights().first(n_); }
  [[nodiscard]] double weight(State s) const { return s.is_infinity() ? 0.0 : env_.weight(s.index()); }

 private:
  Environment env_;
  double c_;
  std::size_t n_;
};

/// A maximal constancy interval [start, end) of a sampled path.
struct Segment {
  State state;
  double start;
  double end;  // +inf when the path never leaves
};

/// Lazily samples the truncated K(gamma, c) chain as a sequence of merged
/// constancy intervals.
///
/// At a finite site x the chain holds Exp(mean w[x]); then with c = 0 it
/// jumps to a uniform site (possibly x again), with c > 0 it visits infinity
/// for Exp(mean c/n) before the uniform draw. Consecutive raw visits to the
/// same site are merged. A start at infinity with c = 0 begins directly at
/// a uniform site.
class PathSampler {
 public:
  PathSampler(std::span<const double> weights, double c, State start, CounterRng& rng);

  Segment next();

 private:
  struct Raw {
    State state;
    double duration;
  };
  Raw first_visit(State start);
  Raw draw_after(State current);
  Raw draw_site();

  std::span<const double> weights_;
  double c_;
  CounterRng& rng_;
  Raw pending_;
  double clock_ = 0.0;
  bool frozen_ = false;
};

/// Piecewise-constant, right-continuous path on [0, horizon].
struct Trajectory {
  State start_state;
  struct Event {
    double time;
    State state;
    friend bool operator==(const Event&, const Event&) = default;
  };
  std::vector<Event> events;  // strictly increasing times in (0, horizon]
  double horizon;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Samples one path of the truncated chain up to `horizon`. Throws
/// std::domain_error for a start index beyond n, std::invalid_argument for
/// a nonpositive horizon.
Trajectory simulate_k(const KParams& params, State start, double horizon, const SeedSpec& seed);

/// Same chain on explicit mean holding times; shared by the trap model.
Trajectory simulate_chain(std::span<const double> weights, double c, State start, double horizon,
                          const SeedSpec& seed);

/// Value at t (right-continuous). Throws std::out_of_range outside [0, horizon].
State state_at(const Trajectory& traj, double t);

/// Lengths of the completed sojourns at `site` (the sojourn cut by the
/// horizon is excluded).
std::vector<double> sojourn_lengths(const Trajectory& traj, State site);

/// First state in `targets` visited by the chain started at infinity.
/// Throws std::invalid_argument for an empty set or an index beyond n.
State entrance_state(const KParams& params, std::span<const std::size_t> targets, const SeedSpec& seed);

/// Monte Carlo estimate of E_x[exp(-lambda tau_x)], tau_x the exit time of x
/// (one Exp(mean gamma(x)) holding per replica).
McEstimate exit_transform_mc(const KParams& params, std::size_t x, double lambda, std::uint64_t reps,
                             const SeedSpec& seed);

/// Samples of the first hitting time of site x from infinity.
std::vector<double> first_hit_time_mc(const KParams& params, std::size_t x, std::uint64_t reps,
                                      const SeedSpec& seed);

/// Empirical mean and standard error of exp(-lambda * sample).
McEstimate empirical_laplace(std::span<const double> samples, double lambda);

/// Monte Carlo estimate of P_inf(X(S) = state) with S ~ Exp(rate lambda)
/// independent of the path: the Green kernel g_lambda^c(state).
McEstimate green_mc(const KParams& params, State state, double lambda, std::uint64_t reps,
                    const SeedSpec& seed);

/// Monte Carlo estimate of the correlation transform c_lambda(mu): the
/// probability, from infinity, that the path does not leave X(S) during
/// [S, S + T] with S ~ Exp(lambda), T ~ Exp(mu) independent. The residual
/// stay is the raw Exp(mean gamma(x)) holding, as in the limit process where
/// immediate returns have probability 0. Requires c = 0.
McEstimate corr_transform_mc(const KParams& params, double lambda, double mu, std::uint64_t reps,
                             const SeedSpec& seed);

/// CSV with header `time,state`, first row `0,<start>`, 17 significant digits.
std::string trajectory_to_csv(const Trajectory& traj);
void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path);

/// Decimal form with 17 significant digits (printf %.17g, locale independent).
std::string format_double(double x);

}  // namespace kproc
