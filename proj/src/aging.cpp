#include "kproc/aging.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <system_error>

#include "kproc/analytics.hpp"
#include "kproc/parallel.hpp"
#include "kproc/quadrature.hpp"
#include "kproc/stats.hpp"

namespace kproc {

namespace {

constexpr quad::Tolerance kTight{1e-12, 1e-15, 4000};

void check_window(const Trajectory& traj, double t, double tprime) {
  if (!(t >= 0.0 && tprime >= 0.0 && t + tprime <= traj.horizon)) {
    throw std::out_of_range("[t, t + tprime] must lie inside [0, horizon]");
  }
}

double arcsine_prefactor(double a) { return std::sin(std::numbers::pi * a) / std::numbers::pi; }

void check_theta_positive(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw std::domain_error("theta must be positive");
}

struct CurveAcc {
  std::vector<RunningStats> stats;
  std::uint64_t rejected = 0;
  void merge(const CurveAcc& other) {
    for (std::size_t k = 0; k < stats.size(); ++k) stats[k].merge(other.stats[k]);
    rejected += other.rejected;
  }
};

}  // namespace

int phi1(const Trajectory& traj, double t, double tprime) {
  check_window(traj, t, tprime);
  const auto it = std::upper_bound(traj.events.begin(), traj.events.end(), t,
                                   [](double v, const Trajectory::Event& e) { return v < e.time; });
  return (it == traj.events.end() || it->time > t + tprime) ? 1 : 0;
}

int phi2(const Trajectory& traj, double t, double tprime) {
  check_window(traj, t, tprime);
  return state_at(traj, t) == state_at(traj, t + tprime) ? 1 : 0;
}

AgingCurve lambda_mc(const KParams& params, double t, std::span<const double> theta_grid, std::uint64_t reps,
                     const SeedSpec& seed, AgingEstimator estimator) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("t must be positive");
  if (reps == 0) throw std::invalid_argument("reps must be at least 1");
  for (double th : theta_grid) {
    if (!(th >= 0.0) || !std::isfinite(th)) throw std::invalid_argument("theta values must be >= 0");
  }
  const double n = static_cast<double>(params.n());
  const double merge_factor = (n - 1.0) / n;
  CurveAcc init{std::vector<RunningStats>(theta_grid.size()), 0};
  const CurveAcc acc = replicate(reps, seed, init, [&](CurveAcc& a, std::uint64_t, CounterRng& rng) {
    PathSampler sampler(params.weights(), params.c(), State::infinity(), rng);
    Segment seg = sampler.next();
    while (seg.end <= t) seg = sampler.next();
    if (estimator == AgingEstimator::Indicator) {
      for (std::size_t k = 0; k < theta_grid.size(); ++k) {
        a.stats[k].add(seg.end > t + theta_grid[k] * t ? 1.0 : 0.0);
      }
      return;
    }
    if (seg.state.is_infinity()) {
      ++a.rejected;
      return;
    }
    const double rate = merge_factor / params.weight(seg.state);
    for (std::size_t k = 0; k < theta_grid.size(); ++k) a.stats[k].add(std::exp(-theta_grid[k] * t * rate));
  });

  AgingCurve curve;
  curve.theta_grid.assign(theta_grid.begin(), theta_grid.end());
  curve.t = t;
  curve.alpha = params.env().alpha();
  curve.rejected = acc.rejected;
  for (const auto& s : acc.stats) {
    curve.values.push_back(s.mean());
    curve.std_errors.push_back(s.std_error());
  }
  return curve;
}

double lambda0(double theta, AlphaParam alpha) {
  if (!(theta >= 0.0)) throw std::domain_error("theta must be >= 0");
  if (theta == 0.0) return 1.0;
  if (std::isinf(theta)) return 0.0;
  const double a = alpha.value();
  const double lo = theta / (1.0 + theta);
  auto f = [a](double s) { return std::pow(s, -a) * std::pow(1.0 - s, a - 1.0); };
  double sum = 0.0;
  if (lo < 0.5) sum += quad::integrate_left_power(f, lo, 0.5 - lo, -a, kTight).value;
  // Near s = 1 integrate in the distance r = 1 - s, which avoids
  // cancellation; 1 - lo = 1 / (1 + theta) exactly.
  const double gap = lo < 0.5 ? 0.5 : 1.0 / (1.0 + theta);
  auto g = [a](double r) { return std::pow(1.0 - r, -a) * std::pow(r, a - 1.0); };
  sum += quad::integrate_left_power(g, 0.0, gap, a - 1.0, kTight).value;
  return arcsine_prefactor(a) * sum;
}

double lambda0_prime(double theta, AlphaParam alpha) {
  check_theta_positive(theta);
  const double a = alpha.value();
  return -arcsine_prefactor(a) * std::pow(theta, -a) / (1.0 + theta);
}

double gamma_integral(double a) {
  if (!(a > -1.0)) throw std::domain_error("gamma_integral needs a > -1");
  return quad::integrate_half_line([a](double t) { return std::pow(t, a) * std::exp(-t); }, a, 1.0, kTight)
      .value;
}

double stable_normalizer(AlphaParam alpha) {
  const double a = alpha.value();
  return quad::integrate_half_line([a](double w) { return std::pow(w, -a) / (1.0 + w); }, -a, a, kTight).value;
}

double lambda0_density(double z, AlphaParam alpha) {
  if (!(z > 0.0) || !std::isfinite(z)) throw std::domain_error("z must be positive");
  const double a = alpha.value();
  // Inner integral int_0^1 a s^{a-1} e^{-(1-s) z} ds. The half near s = 1 is
  // written in r = 1 - s; beyond r = 60/z the exponential is negligible.
  auto near_one = [a, z](double r) { return a * std::pow(1.0 - r, a - 1.0) * std::exp(-r * z); };
  auto near_zero = [a, z](double s) { return a * std::pow(s, a - 1.0) * std::exp(-(1.0 - s) * z); };
  const double upper = std::min(1.0, 60.0 / z);
  double inner = quad::integrate(near_one, 0.0, std::min(upper, 0.5), kTight).value;
  if (upper == 1.0) {
    inner += quad::integrate_left_power(near_zero, 0.0, 0.5, a - 1.0, kTight).value;
  } else if (upper > 0.5) {
    inner += quad::integrate(near_zero, 1.0 - upper, 0.5, kTight).value;
  }
  // The normalizer depends on alpha only; callers integrate over z.
  thread_local double cached_alpha = -1.0;
  thread_local double cached_norm = 0.0;
  if (cached_alpha != a) {
    cached_norm = gamma_integral(a) * stable_normalizer(alpha);
    cached_alpha = a;
  }
  return std::pow(z, a - 1.0) * inner / cached_norm;
}

double c_theta(double theta, AlphaParam alpha) {
  if (!(theta >= 0.0)) throw std::domain_error("theta must be >= 0");
  if (theta == 0.0) return 1.0;
  if (std::isinf(theta)) return 0.0;
  const double a = alpha.value();
  auto num = [a, theta](double w) { return w / (1.0 + w) * (w / (theta + w)) * std::pow(w, -1.0 - a); };
  const double numer = quad::integrate_half_line(num, 1.0 - a, a, kTight).value;
  return numer / stable_normalizer(alpha);
}

double lambda_hat(double theta, AlphaParam alpha) {
  check_theta_positive(theta);
  const double a = alpha.value();
  auto f = [a, theta](double w) { return std::exp(-theta / w) * std::pow(w, -1.0 - a); };
  const double numer = quad::integrate_half_line(f, 0.0, a, kTight).value;
  return numer / (gamma_integral(a) * stable_normalizer(alpha));
}

double lambda_tilde(double theta, AlphaParam alpha) {
  check_theta_positive(theta);
  const double a = alpha.value();
  const quad::Tolerance inner_tol{1e-11, 1e-15, 2000};
  auto outer = [&](double s) {
    const double gap = 1.0 + theta - s;
    auto inner = [gap, a](double w) { return std::exp(-gap / w) * std::pow(w, -2.0 - a); };
    return std::pow(s, a) * quad::integrate_half_line(inner, 0.0, 1.0 + a, inner_tol).value;
  };
  const double numer = quad::integrate_left_power(outer, 0.0, 1.0, a, {1e-10, 1e-15, 2000}).value;
  return numer / (gamma_integral(a) * stable_normalizer(alpha));
}

double corollary_limit(double theta, AlphaParam alpha, const std::function<double(double)>& psi1,
                       const std::function<double(double, double)>& psi2) {
  check_theta_positive(theta);
  const double p1 = psi1(theta);
  if (!std::isfinite(p1)) throw std::domain_error("psi1 returned a non-finite value");
  auto f = [&](double s) {
    const double p2 = psi2(s, theta);
    if (!std::isfinite(p2)) throw std::domain_error("psi2 returned a non-finite value");
    return p2 == 0.0 ? 0.0 : p2 * lambda0_prime(s, alpha);
  };
  const double integral = quad::integrate_left_power(f, 0.0, theta, -alpha.value(), kTight).value;
  return p1 * lambda0(theta, alpha) - integral;
}

std::pair<double, double> corr_transform_limit_check(AlphaParam alpha, double theta, double lambda_big,
                                                     const Environment& env) {
  check_theta_positive(theta);
  if (!(lambda_big > 0.0)) throw std::domain_error("lambda must be positive");
  return {corr_transform(env, lambda_big, lambda_big / theta).value, c_theta(theta, alpha)};
}

AgingCurve lambda0_curve(std::span<const double> theta_grid, AlphaParam alpha) {
  AgingCurve curve;
  curve.theta_grid.assign(theta_grid.begin(), theta_grid.end());
  curve.alpha = alpha;
  for (double th : theta_grid) curve.values.push_back(lambda0(th, alpha));
  return curve;
}

std::string aging_curve_to_csv(const AgingCurve& curve) {
  std::string out = "theta,value,std_error\n";
  for (std::size_t k = 0; k < curve.theta_grid.size(); ++k) {
    out += format_double(curve.theta_grid[k]) + "," + format_double(curve.values[k]) + ",";
    out += curve.std_errors.empty() ? "0" : format_double(curve.std_errors[k]);
    out += '\n';
  }
  return out;
}

std::string aging_curve_file_name(const AgingCurve& curve) {
  if (!curve.t) return "lambda0.csv";
  // Shortest round-trip text, preferring plain decimals such as 0.0001.
  char buf[400];
  auto res = std::to_chars(buf, buf + sizeof buf, *curve.t, std::chars_format::fixed);
  if (res.ec != std::errc() || res.ptr - buf > 12) {
    res = std::to_chars(buf, buf + sizeof buf, *curve.t);
  }
  return "lambda_t=" + std::string(buf, res.ptr) + ".csv";
}

void write_aging_curve(const AgingCurve& curve, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << aging_curve_to_csv(curve);
}

}  // namespace kproc
