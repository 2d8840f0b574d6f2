#include "kproc/kprocess.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "kproc/parallel.hpp"

namespace kproc {

State State::site(std::size_t index) {
  if (index == 0) throw std::domain_error("site indices start at 1");
  return State(index);
}

std::string State::to_string() const { return is_infinity() ? "inf" : std::to_string(value_); }

State State::parse(const std::string& token) {
  if (token == "inf") return infinity();
  std::size_t value = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc{} || ptr != end || value == 0) {
    throw std::invalid_argument("state must be 'inf' or a positive integer, got '" + token + "'");
  }
  return State(value);
}

KParams::KParams(Environment env, double c, std::optional<std::size_t> n)
    : env_(std::move(env)), c_(c), n_(n.value_or(env_.size())) {
  if (!(c_ >= 0.0) || !std::isfinite(c_)) throw std::domain_error("c must be finite and >= 0");
  if (n_ < 1 || n_ > env_.size()) {
    throw std::domain_error("truncation level must lie in [1, " + std::to_string(env_.size()) + "]");
  }
}

// ---------------------------------------------------------------------------

PathSampler::PathSampler(std::span<const double> weights, double c, State start, CounterRng& rng)
    : weights_(weights), c_(c), rng_(rng), pending_(first_visit(start)) {}

PathSampler::Raw PathSampler::first_visit(State start) {
  if (!start.is_infinity()) return Raw{start, rng_.exponential(weights_[start.index() - 1])};
  if (c_ > 0.0) return Raw{State::infinity(), rng_.exponential(c_ / static_cast<double>(weights_.size()))};
  return draw_site();
}

PathSampler::Raw PathSampler::draw_site() {
  const std::size_t site = rng_.index(weights_.size()) + 1;
  return Raw{State::site(site), rng_.exponential(weights_[site - 1])};
}

PathSampler::Raw PathSampler::draw_after(State current) {
  if (!current.is_infinity() && c_ > 0.0) {
    return Raw{State::infinity(), rng_.exponential(c_ / static_cast<double>(weights_.size()))};
  }
  return draw_site();
}

Segment PathSampler::next() {
  Segment seg{pending_.state, clock_, clock_};
  if (frozen_) {
    seg.end = std::numeric_limits<double>::infinity();
    return seg;
  }
  // A single site with no infinity holding never changes state.
  if (weights_.size() == 1 && c_ == 0.0) {
    frozen_ = true;
    seg.end = std::numeric_limits<double>::infinity();
    return seg;
  }
  double duration = pending_.duration;
  Raw raw = draw_after(pending_.state);
  while (raw.state == seg.state) {
    duration += raw.duration;
    raw = draw_after(raw.state);
  }
  pending_ = raw;
  clock_ += duration;
  seg.end = clock_;
  return seg;
}

// ---------------------------------------------------------------------------

namespace {

void check_start(State start, std::size_t n) {
  if (!start.is_infinity() && start.index() > n) {
    throw std::domain_error("start index " + std::to_string(start.index()) +
                            " exceeds truncation level " + std::to_string(n));
  }
}

void check_site(std::size_t x, std::size_t n) {
  if (x < 1 || x > n) {
    throw std::domain_error("site " + std::to_string(x) + " outside [1, " + std::to_string(n) + "]");
  }
}

void check_reps(std::uint64_t reps) {
  if (reps == 0) throw std::invalid_argument("reps must be at least 1");
}

}  // namespace

Trajectory simulate_chain(std::span<const double> weights, double c, State start, double horizon,
                          const SeedSpec& seed) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("horizon must be positive and finite");
  }
  check_start(start, weights.size());
  CounterRng rng(seed);
  PathSampler sampler(weights, c, start, rng);
  Segment seg = sampler.next();
  Trajectory traj{seg.state, {}, horizon};
  while (seg.end <= horizon) {
    seg = sampler.next();
    traj.events.push_back({seg.start, seg.state});
  }
  return traj;
}

Trajectory simulate_k(const KParams& params, State start, double horizon, const SeedSpec& seed) {
  return simulate_chain(params.weights(), params.c(), start, horizon, seed);
}

State state_at(const Trajectory& traj, double t) {
  if (!(t >= 0.0 && t <= traj.horizon)) {
    throw std::out_of_range("time outside [0, horizon]");
  }
  const auto it = std::upper_bound(traj.events.begin(), traj.events.end(), t,
                                   [](double v, const Trajectory::Event& e) { return v < e.time; });
  return it == traj.events.begin() ? traj.start_state : std::prev(it)->state;
}

std::vector<double> sojourn_lengths(const Trajectory& traj, State site) {
  std::vector<double> out;
  State current = traj.start_state;
  double since = 0.0;
  for (const auto& e : traj.events) {
    if (current == site) out.push_back(e.time - since);
    current = e.state;
    since = e.time;
  }
  return out;
}

State entrance_state(const KParams& params, std::span<const std::size_t> targets,
                     const SeedSpec& seed) {
  if (targets.empty()) throw std::invalid_argument("target set must be nonempty");
  std::vector<char> member(params.n() + 1, 0);
  for (auto x : targets) {
    if (x < 1 || x > params.n()) throw std::invalid_argument("target index outside [1, n]");
    member[x] = 1;
  }
  CounterRng rng(seed);
  PathSampler sampler(params.weights(), params.c(), State::infinity(), rng);
  for (;;) {
    const Segment seg = sampler.next();
    if (!seg.state.is_infinity() && member[seg.state.index()]) return seg.state;
  }
}

McEstimate exit_transform_mc(const KParams& params, std::size_t x, double lambda, std::uint64_t reps,
                             const SeedSpec& seed) {
  check_site(x, params.n());
  check_reps(reps);
  if (!(lambda >= 0.0)) throw std::domain_error("lambda must be >= 0");
  const double mean = params.env().weight(x);
  const auto stats = replicate(reps, seed, RunningStats{},
                               [&](RunningStats& acc, std::uint64_t, CounterRng& rng) {
                                 acc.add(std::exp(-lambda * rng.exponential(mean)));
                               });
  return McEstimate::from(stats);
}

namespace {

struct SampleShard {
  std::vector<std::pair<std::uint64_t, double>> values;
  void merge(const SampleShard& other) {
    values.insert(values.end(), other.values.begin(), other.values.end());
  }
};

}  // namespace

std::vector<double> first_hit_time_mc(const KParams& params, std::size_t x, std::uint64_t reps,
                                      const SeedSpec& seed) {
  check_site(x, params.n());
  check_reps(reps);
  const State target = State::site(x);
  auto shards = replicate(reps, seed, SampleShard{},
                          [&](SampleShard& acc, std::uint64_t i, CounterRng& rng) {
                            PathSampler sampler(params.weights(), params.c(), State::infinity(), rng);
                            for (;;) {
                              const Segment seg = sampler.next();
                              if (seg.state == target) {
                                acc.values.emplace_back(i, seg.start);
                                return;
                              }
                            }
                          });
  std::vector<double> out(reps);
  for (const auto& [i, v] : shards.values) out[i] = v;
  return out;
}

McEstimate empirical_laplace(std::span<const double> samples, double lambda) {
  RunningStats stats;
  for (double s : samples) stats.add(std::exp(-lambda * s));
  return McEstimate::from(stats);
}

McEstimate green_mc(const KParams& params, State state, double lambda, std::uint64_t reps,
                    const SeedSpec& seed) {
  check_start(state, params.n());
  check_reps(reps);
  if (!(lambda > 0.0)) throw std::domain_error("lambda must be > 0");
  const auto stats = replicate(reps, seed, RunningStats{},
                               [&](RunningStats& acc, std::uint64_t, CounterRng& rng) {
                                 const double when = rng.exponential(1.0 / lambda);
                                 PathSampler sampler(params.weights(), params.c(), State::infinity(), rng);
                                 Segment seg = sampler.next();
                                 while (seg.end <= when) seg = sampler.next();
                                 acc.add(seg.state == state ? 1.0 : 0.0);
                               });
  return McEstimate::from(stats);
}

McEstimate corr_transform_mc(const KParams& params, double lambda, double mu, std::uint64_t reps,
                             const SeedSpec& seed) {
  check_reps(reps);
  if (!(lambda > 0.0 && mu > 0.0)) throw std::domain_error("lambda and mu must be > 0");
  if (params.c() != 0.0) throw std::domain_error("correlation transform is defined for c = 0");
  const auto stats = replicate(reps, seed, RunningStats{},
                               [&](RunningStats& acc, std::uint64_t, CounterRng& rng) {
                                 const double when = rng.exponential(1.0 / lambda);
                                 const double window = rng.exponential(1.0 / mu);
                                 PathSampler sampler(params.weights(), 0.0, State::infinity(), rng);
                                 Segment seg = sampler.next();
                                 while (seg.end <= when) seg = sampler.next();
                                 const double residual = rng.exponential(params.weight(seg.state));
                                 acc.add(residual > window ? 1.0 : 0.0);
                               });
  return McEstimate::from(stats);
}

// ---------------------------------------------------------------------------

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

std::string trajectory_to_csv(const Trajectory& traj) {
  std::string out = "time,state\n0," + traj.start_state.to_string() + "\n";
  for (const auto& e : traj.events) {
    out += format_double(e.time);
    out += ',';
    out += e.state.to_string();
    out += '\n';
  }
  return out;
}

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << trajectory_to_csv(traj);
}

}  // namespace kproc
