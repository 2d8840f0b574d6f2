// kproc: command-line driver for sampling, simulation, analytic evaluation,
// aging experiments and the verification suite.
//
// Exit status: 0 success, 1 failed verification check, 2 usage or input error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kproc/aging.hpp"
#include "kproc/analytics.hpp"
#include "kproc/env.hpp"
#include "kproc/kprocess.hpp"
#include "kproc/parallel.hpp"
#include "kproc/trapmodel.hpp"
#include "kproc/verify.hpp"

namespace {

using namespace kproc;

constexpr int kUsageError = 2;
constexpr int kCheckFailure = 1;

// Reads option values from a JSON document. Nested objects address
// subcommands: {"simulate": {"horizon": 2}}.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}\n"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(input);
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ValidationError("--config", e.what());
    }
    if (!doc.is_object()) throw CLI::ValidationError("--config", "top level must be an object");
    std::vector<CLI::ConfigItem> items;
    flatten(doc, {}, items);
    return items;
  }

 private:
  static std::string scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void flatten(const nlohmann::json& obj, const std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : obj.items()) {
      if (value.is_object()) {
        auto path = parents;
        path.push_back(key);
        flatten(value, path, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
  }
};

void emit(const std::string& text, const std::string& out) {
  if (out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + out + " for writing");
  f << text;
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

// --- env sample ------------------------------------------------------------

struct EnvSampleArgs {
  double alpha = 0.0;
  std::size_t terms = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::string out;
};

void setup_env(CLI::App& app, EnvSampleArgs& a) {
  auto* env = app.add_subcommand("env", "Environment utilities");
  env->require_subcommand(1);
  auto* sample = env->add_subcommand("sample", "Sample the ordered jumps of an alpha-stable subordinator");
  sample->add_option("--alpha", a.alpha, "Tail exponent in (0, 1)")->required();
  sample->add_option("--terms", a.terms, "Number of weights kept")->required()->check(CLI::PositiveNumber);
  sample->add_option("--seed", a.seed, "Seed")->required();
  sample->add_option("--stream", a.stream, "Stream index");
  sample->add_option("--out", a.out, "Output .env.json path ('-' for stdout)")->required();
}

int cmd_env_sample(const EnvSampleArgs& a) {
  emit(env_to_json(sample_gamma(AlphaParam(a.alpha), a.terms, {a.seed, a.stream})), a.out);
  return 0;
}

// --- simulate --------------------------------------------------------------

struct SimulateArgs {
  std::string model;
  std::string env;
  double c = 0.0;
  std::optional<std::size_t> truncate;
  std::size_t n = 0;
  double alpha = 0.0;
  std::string trap_env;
  std::string save_trap_env;
  std::string start = "inf";
  double horizon = 0.0;
  std::uint64_t seed = 0;
  std::string out = "-";
};

void setup_simulate(CLI::App& app, SimulateArgs& a) {
  auto* sim = app.add_subcommand("simulate", "Simulate the truncated K-process or the trap model");
  sim->add_option("--model", a.model, "k or trap")->required()->check(CLI::IsMember({"k", "trap"}));
  sim->add_option("--env", a.env, "Environment file (model k)");
  sim->add_option("--c", a.c, "Holding parameter at infinity (model k)");
  sim->add_option("--truncate", a.truncate, "Truncation level n (model k; default: all weights)");
  sim->add_option("--n", a.n, "Graph size (model trap)");
  sim->add_option("--alpha", a.alpha, "Tail exponent (model trap)");
  sim->add_option("--trap-env", a.trap_env, "Trap environment file instead of sampling (model trap)");
  sim->add_option("--save-trap-env", a.save_trap_env, "Write the sampled trap environment here");
  sim->add_option("--start", a.start, "Start state: 'inf' or a site index");
  sim->add_option("--horizon", a.horizon, "Time horizon (macroscopic for trap)")->required();
  sim->add_option("--seed", a.seed, "Seed")->required();
  sim->add_option("--out", a.out, "Output CSV path ('-' for stdout)");
}

int cmd_simulate(const SimulateArgs& a) {
  const State start = State::parse(a.start);
  if (a.model == "k") {
    if (a.env.empty()) throw CLI::ValidationError("--env", "required for --model k");
    const KParams params(read_env_file(a.env), a.c, a.truncate);
    emit(trajectory_to_csv(simulate_k(params, start, a.horizon, {a.seed, 0})), a.out);
    return 0;
  }
  TrapEnv trap = [&] {
    if (!a.trap_env.empty()) return trap_env_from_json(read_text(a.trap_env));
    if (a.n == 0) throw CLI::ValidationError("--n", "required for --model trap");
    return sample_trap_env(a.n, AlphaParam(a.alpha), {a.seed, 0});
  }();
  if (!a.save_trap_env.empty()) emit(trap_env_to_json(trap), a.save_trap_env);
  emit(trajectory_to_csv(simulate_trap(trap, start, a.horizon, {a.seed, 1})), a.out);
  return 0;
}

// --- analytic --------------------------------------------------------------

struct AnalyticArgs {
  std::string name;
  double alpha = 0.5;
  std::vector<double> theta;
  std::vector<double> z;
  std::string env;
  double c = 0.0;
  double lambda = 1.0;
  double mu = 1.0;
  std::string x = "1";
  std::string from = "inf";
  std::vector<std::size_t> targets;
  int i = 0;
  int j = 1;
  double r = 1.0;
  std::string out = "-";
};

const std::vector<std::string> kAnalyticNames{"lambda0", "lambda0-prime", "density", "c-theta", "lambda-hat",
                                              "lambda-tilde", "exit", "entrance", "green", "corr",
                                              "first-hit", "omega"};

void setup_analytic(CLI::App& app, AnalyticArgs& a) {
  auto* an = app.add_subcommand("analytic", "Evaluate a closed-form quantity");
  an->add_option("name", a.name, "Quantity to evaluate")->required()->check(CLI::IsMember(kAnalyticNames));
  an->add_option("--alpha", a.alpha, "Tail exponent for limit laws");
  an->add_option("--theta", a.theta, "Theta grid for limit laws");
  an->add_option("--z", a.z, "Points for the density");
  an->add_option("--env", a.env, "Environment file for transforms");
  an->add_option("--c", a.c, "Holding parameter at infinity");
  an->add_option("--lambda", a.lambda, "First transform variable");
  an->add_option("--mu", a.mu, "Second transform variable (corr)");
  an->add_option("--x", a.x, "Site (exit, first-hit) or state (green)");
  an->add_option("--from", a.from, "Start state (entrance)");
  an->add_option("--targets", a.targets, "Target set (entrance)");
  an->add_option("--i", a.i, "omega index i (0 or 1)");
  an->add_option("--j", a.j, "omega index j (1 or 2)");
  an->add_option("--r", a.r, "omega argument");
  an->add_option("--out", a.out, "Output CSV path ('-' for stdout)");
}

int cmd_analytic(const AnalyticArgs& a) {
  std::string csv;
  auto grid = [&](const std::string& var, const std::vector<double>& pts, auto&& f) {
    if (pts.empty()) throw CLI::ValidationError("--" + var, "needs at least one value");
    csv = var + ",value\n";
    for (double p : pts) csv += format_double(p) + "," + format_double(f(p)) + "\n";
  };
  auto single = [&](const TransformResult& t) {
    csv = "value,truncation_error_bound\n" + format_double(t.value) + "," + format_double(t.truncation_error_bound) +
          "\n";
  };
  auto env = [&] {
    if (a.env.empty()) throw CLI::ValidationError("--env", "required for " + a.name);
    return read_env_file(a.env);
  };
  const AlphaParam alpha(a.alpha);
  const std::string& n = a.name;
  if (n == "lambda0") grid("theta", a.theta, [&](double t) { return lambda0(t, alpha); });
  if (n == "lambda0-prime") grid("theta", a.theta, [&](double t) { return lambda0_prime(t, alpha); });
  if (n == "density") grid("z", a.z, [&](double z) { return lambda0_density(z, alpha); });
  if (n == "c-theta") grid("theta", a.theta, [&](double t) { return c_theta(t, alpha); });
  if (n == "lambda-hat") grid("theta", a.theta, [&](double t) { return lambda_hat(t, alpha); });
  if (n == "lambda-tilde") grid("theta", a.theta, [&](double t) { return lambda_tilde(t, alpha); });
  if (n == "exit") {
    const Environment e = env();
    single({laplace_exit(e.weight(State::parse(a.x).index()), a.lambda), 0.0});
  }
  if (n == "entrance") {
    if (a.targets.empty()) throw CLI::ValidationError("--targets", "needs at least one site");
    single(entrance_transform(env(), a.targets, a.lambda, State::parse(a.from)));
  }
  if (n == "green") single(green(env(), a.c, a.lambda, State::parse(a.x)));
  if (n == "corr") single(corr_transform(env(), a.lambda, a.mu));
  if (n == "first-hit") single(first_hit_transform(env(), a.c, State::parse(a.x).index(), a.lambda));
  if (n == "omega") single(omega(env(), a.i, a.j, a.r));
  emit(csv, a.out);
  return 0;
}

// --- aging curve -----------------------------------------------------------

struct AgingArgs {
  std::string env;
  std::optional<double> alpha;
  std::size_t terms = 10000;
  std::uint64_t env_seed = 0;
  double c = 0.0;
  std::vector<double> t;
  std::vector<double> theta;
  std::uint64_t reps = 0;
  std::uint64_t seed = 0;
  std::string estimator = "conditional";
  std::string out_dir;
};

void setup_aging(CLI::App& app, AgingArgs& a) {
  auto* aging = app.add_subcommand("aging", "Aging experiments");
  aging->require_subcommand(1);
  auto* curve = aging->add_subcommand("curve", "Monte Carlo Lambda_t over t and theta grids, plus lambda0");
  curve->add_option("--env", a.env, "Environment file (otherwise sampled from --alpha/--terms/--env-seed)");
  curve->add_option("--alpha", a.alpha, "Tail exponent (sampling, and lambda0 if the env has none)");
  curve->add_option("--terms", a.terms, "Weights to sample")->check(CLI::PositiveNumber);
  curve->add_option("--env-seed", a.env_seed, "Seed for sampling the environment");
  curve->add_option("--c", a.c, "Holding parameter at infinity");
  curve->add_option("--t", a.t, "Times t")->required()->check(CLI::PositiveNumber);
  curve->add_option("--theta", a.theta, "Theta grid")->required()->check(CLI::NonNegativeNumber);
  curve->add_option("--reps", a.reps, "Replicas per t")->required()->check(CLI::PositiveNumber);
  curve->add_option("--seed", a.seed, "Seed")->required();
  curve->add_option("--estimator", a.estimator, "indicator or conditional")
      ->check(CLI::IsMember({"indicator", "conditional"}));
  curve->add_option("--out-dir", a.out_dir, "Directory for the CSVs and summary.json")->required();
}

int cmd_aging(const AgingArgs& a) {
  Environment env = [&] {
    if (!a.env.empty()) return read_env_file(a.env);
    if (!a.alpha) throw CLI::ValidationError("--alpha", "required when --env is not given");
    return sample_gamma(AlphaParam(*a.alpha), a.terms, {a.env_seed, 0});
  }();
  const std::optional<AlphaParam> alpha = a.alpha ? std::optional<AlphaParam>(AlphaParam(*a.alpha)) : env.alpha();
  if (!alpha) throw CLI::ValidationError("--alpha", "the environment records no alpha");
  const KParams params(std::move(env), a.c);
  const auto estimator = a.estimator == "indicator" ? AgingEstimator::Indicator : AgingEstimator::Conditional;

  const std::filesystem::path dir(a.out_dir);
  std::filesystem::create_directories(dir);
  const AgingCurve limit = lambda0_curve(a.theta, *alpha);
  write_aging_curve(limit, dir / aging_curve_file_name(limit));

  nlohmann::ordered_json summary;
  summary["alpha"] = alpha->value();
  summary["estimator"] = a.estimator;
  summary["reps"] = a.reps;
  summary["curves"] = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < a.t.size(); ++k) {
    const AgingCurve curve = lambda_mc(params, a.t[k], a.theta, a.reps, {a.seed, k}, estimator);
    write_aging_curve(curve, dir / aging_curve_file_name(curve));
    double dev = 0.0;
    for (std::size_t i = 0; i < curve.values.size(); ++i) {
      dev = std::max(dev, std::abs(curve.values[i] - limit.values[i]));
    }
    nlohmann::ordered_json row;
    row["t"] = a.t[k];
    row["file"] = aging_curve_file_name(curve);
    row["max_deviation"] = dev;
    row["rejected"] = curve.rejected;
    summary["curves"].push_back(row);
  }
  emit(summary.dump(2) + "\n", (dir / "summary.json").string());
  return 0;
}

// --- verify ----------------------------------------------------------------

struct VerifyArgs {
  std::string only;
  std::optional<double> tolerance;
  std::uint64_t seed = VerifyOptions{}.seed;
  std::string out = "-";
};

void setup_verify(CLI::App& app, VerifyArgs& a) {
  auto* v = app.add_subcommand("verify", "Run the acceptance checks and write a JSON report");
  v->add_option("--only", a.only, "'quadrature' or a comma-separated list of criterion numbers");
  v->add_option("--tolerance", a.tolerance, "Replace every tolerance (e.g. 0 to force failures)");
  v->add_option("--seed", a.seed, "Seed");
  v->add_option("--out", a.out, "Report path ('-' for stdout)");
}

int cmd_verify(const VerifyArgs& a) {
  VerifyOptions opt;
  opt.seed = a.seed;
  opt.tolerance_override = a.tolerance;
  if (a.only == "quadrature") {
    opt.only = kQuadratureCriteria;
  } else if (!a.only.empty()) {
    std::stringstream ss(a.only);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        const int c = std::stoi(tok);
        if (c < 1 || c > 9) throw std::out_of_range(tok);
        opt.only.insert(c);
      } catch (const std::exception&) {
        throw CLI::ValidationError("--only", "expected 'quadrature' or criterion numbers 1-9, got '" + tok + "'");
      }
    }
  }
  const auto results = run_verify(opt);
  for (const auto& r : results) {
    std::cerr << (r.pass ? "PASS " : "FAIL ") << r.criterion << " " << r.name << ": " << format_double(r.measured)
              << " (tolerance " << format_double(r.tolerance) << ")\n";
  }
  emit(verify_report_json(results), a.out);
  return all_pass(results) ? 0 : kCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"K-process and trap-model toolkit"};
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file with option values; command-line flags take precedence");
  unsigned workers = 0;
  app.add_option("--workers", workers, "Worker threads (0 = hardware concurrency)");

  EnvSampleArgs env_args;
  SimulateArgs sim_args;
  AnalyticArgs analytic_args;
  AgingArgs aging_args;
  VerifyArgs verify_args;
  setup_env(app, env_args);
  setup_simulate(app, sim_args);
  setup_analytic(app, analytic_args);
  setup_aging(app, aging_args);
  setup_verify(app, verify_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  set_worker_count(workers);
  try {
    if (app.got_subcommand("env")) return cmd_env_sample(env_args);
    if (app.got_subcommand("simulate")) return cmd_simulate(sim_args);
    if (app.got_subcommand("analytic")) return cmd_analytic(analytic_args);
    if (app.got_subcommand("aging")) return cmd_aging(aging_args);
    if (app.got_subcommand("verify")) return cmd_verify(verify_args);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}
