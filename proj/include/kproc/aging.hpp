#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kproc/env.hpp"
#include "kproc/kprocess.hpp"

namespace kproc {

/// Two-time correlation curve theta -> Lambda(theta). Monte Carlo curves
/// carry a time t and standard errors; limit curves have neither.
struct AgingCurve {
  std::vector<double> theta_grid;
  std::vector<double> values;
  std::vector<double> std_errors;  // empty for analytic curves
  std::optional<double> t;
  std::optional<AlphaParam> alpha;
  std::uint64_t rejected = 0;  // replicas with Y(t) = infinity (CONDITIONAL only)
};

/// 1 if the path does not change on [t, t + tprime]. Throws
/// std::out_of_range if t + tprime exceeds the horizon.
int phi1(const Trajectory& traj, double t, double tprime);
/// 1 if X(t) == X(t + tprime). Same errors as phi1.
int phi2(const Trajectory& traj, double t, double tprime);

enum class AgingEstimator { Indicator, Conditional };

/// Monte Carlo estimate of Lambda_t(theta) = P_inf(no jump in [t, t + theta t] | gamma).
///
/// INDICATOR averages 1{merged sojourn at t outlasts t + theta t}.
/// CONDITIONAL averages exp(-theta t (n-1) / (n gamma(Y(t)))), the exact
/// conditional probability given Y(t): by memorylessness the residual merged
/// sojourn is Exp with mean gamma n / (n-1). For n = 1 the chain is frozen and
/// both estimators return 1.
AgingCurve lambda_mc(const KParams& params, double t, std::span<const double> theta_grid, std::uint64_t reps,
                     const SeedSpec& seed, AgingEstimator estimator);

/// Generalized arcsine distribution function
/// (sin pi a / pi) int_{theta/(1+theta)}^1 s^{-a} (1-s)^{a-1} ds; 1 at theta = 0.
double lambda0(double theta, AlphaParam alpha);
/// -(sin pi a / pi) theta^{-a} / (1 + theta). Throws std::domain_error for theta <= 0.
double lambda0_prime(double theta, AlphaParam alpha);
/// Density of the limit of t / gamma(Y_t); its Laplace transform is lambda0.
double lambda0_density(double z, AlphaParam alpha);
/// Limit of c_lambda(lambda / theta): ratio of two improper integrals. 1 at theta = 0.
double c_theta(double theta, AlphaParam alpha);

/// int_0^inf t^a e^{-t} dt by quadrature.
double gamma_integral(double a);
/// int_0^inf w^{-a} / (1 + w) dw by quadrature (= pi / sin(pi a)).
double stable_normalizer(AlphaParam alpha);

double lambda_hat(double theta, AlphaParam alpha);
double lambda_tilde(double theta, AlphaParam alpha);

/// psi1(theta) lambda0(theta) - int_0^theta psi2(s, theta) lambda0'(s) ds.
/// Throws std::domain_error if a psi evaluation is not finite.
double corollary_limit(double theta, AlphaParam alpha, const std::function<double(double)>& psi1,
                       const std::function<double(double, double)>& psi2);

/// (c_lambda(lambda/theta) for `env`, c(theta)).
std::pair<double, double> corr_transform_limit_check(AlphaParam alpha, double theta, double lambda_big,
                                                     const Environment& env);

/// Analytic curve lambda0 over a grid (std_errors left empty).
AgingCurve lambda0_curve(std::span<const double> theta_grid, AlphaParam alpha);

/// CSV `theta,value,std_error`; analytic curves write std_error 0.
std::string aging_curve_to_csv(const AgingCurve& curve);
/// `lambda_t=<t>.csv` for Monte Carlo curves, `lambda0.csv` otherwise.
std::string aging_curve_file_name(const AgingCurve& curve);
void write_aging_curve(const AgingCurve& curve, const std::filesystem::path& path);

}  // namespace kproc
