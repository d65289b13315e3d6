// arblobo: acceptance estimates, convergence lower bounds and the simulation
// studies from the command line.
//
// Exit codes: 0 success, 1 usage or input error, 2 verification failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "arblobo/bounds.hpp"
#include "arblobo/config.hpp"
#include "arblobo/errors.hpp"
#include "arblobo/experiments.hpp"
#include "arblobo/kernels.hpp"
#include "arblobo/proposals.hpp"
#include "arblobo/targets.hpp"

namespace {

using namespace arblobo;

constexpr int kUsage = 1;
constexpr int kViolation = 2;

// Writes to `path`, or standard output when empty.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw InvalidArgument("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

struct EstimateOptions {
  std::string target = "gaussian";
  double sigma2 = 1.0;
  std::size_t d = 1;
  double b = 2.0;
  std::string proposal = "rw";
  double h = 1.0;
  std::string rule = "mh";
  double delta = 0.5;
  std::vector<double> at;
  std::size_t n = 10000;
  std::uint64_t seed = 1;
};

int estimate_accept(const EstimateOptions& o) {
  TargetDensity target = [&] {
    if (o.target == "gaussian") return make_gaussian(o.sigma2, o.d);
    if (o.target == "mixture") return make_gaussian_mixture_2d(o.b);
    if (o.target == "subexp") return make_subexponential_2d();
    throw InvalidArgument("unknown target '" + o.target + "'");
  }();
  const std::size_t d = target.dim();
  ProposalFamily proposal = [&] {
    if (o.proposal == "rw") return make_rw_gaussian(o.h, Matrix::identity(d));
    if (o.proposal == "mala") return make_mala(target, o.h);
    if (o.proposal == "cn") return make_crank_nicolson(o.h, d);
    if (o.proposal == "independence") return make_independence(Vector(d, 0.0), o.h, Matrix::identity(d));
    throw InvalidArgument("unknown proposal '" + o.proposal + "'");
  }();
  AcceptanceRule rule = [&] {
    if (o.rule == "mh") return AcceptanceRule::metropolis_hastings();
    if (o.rule == "barker") return AcceptanceRule::barker();
    if (o.rule == "portkey") return AcceptanceRule::portkey_barker(o.delta);
    if (o.rule == "nr-cn") return AcceptanceRule::nonreversible_cn(o.sigma2);
    throw InvalidArgument("unknown rule '" + o.rule + "'");
  }();
  Vector at = o.at.empty() ? Vector(d, 0.0) : o.at;
  if (at.size() == 1 && d > 1) at.assign(d, at[0]);

  const ArbKernel kernel(std::move(target), std::move(proposal), rule);
  RandomStream stream(o.seed);
  const AcceptanceEstimate est = mc_acceptance(kernel, at, o.n, stream);
  nlohmann::json out = {{"mean", est.mean},       {"std_err", est.std_err}, {"samples", est.samples},
                        {"seed", est.seed},       {"stream_id", est.stream_id},
                        {"rate_lower_bound", geo_rate_lb_tv(est.mean)}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

struct CurveOptions {
  std::string kind = "tv";
  double accept = 0.0;
  std::size_t horizon = 10;
  std::size_t d = 1;
  double c0 = 1.0;
  std::optional<double> sup_density;
};

int bound_curve(const CurveOptions& o) {
  BoundCurve curve;
  if (o.kind == "tv") {
    curve = tv_lower_curve(o.accept, o.horizon);
  } else if (o.kind == "wasserstein") {
    if (!o.sup_density) throw InvalidArgument("--sup-density is required for wasserstein curves");
    const double c = wasserstein_constant(o.c0, o.d, *o.sup_density);
    curve = wasserstein_lower_curve(o.accept, o.horizon, o.d, c);
  } else {
    throw InvalidArgument("unknown bound kind '" + o.kind + "' (expected tv or wasserstein)");
  }
  std::cout << "t,lower_bound\n";
  for (std::size_t t = 1; t <= curve.values.size(); ++t) std::cout << t << ',' << format_number(curve.values[t - 1]) << '\n';
  return 0;
}

int report_oracle(const ExperimentConfig& config) {
  const OracleSuiteReport report = run_oracle_suite(config);
  Sink sink(config.output);
  write_oracle_csv(sink.stream(), report);
  std::cerr << "oracle: " << report.rows.size() << " chains, tv violations " << report.tv_violations
            << ", lawler-sokal violations " << report.lawler_sokal_violations << ", singleton violations "
            << report.singleton_violations << ", w-rate failures " << report.w_rate_failures
            << ", two-state example " << (report.two_state_ok ? "ok" : "MISMATCH") << "\n";
  return report.ok() ? 0 : kViolation;
}

int report_examples(const ExperimentConfig& config) {
  const ExamplesReport report = run_examples(config);
  Sink sink(config.output);
  write_examples_csv(sink.stream(), report);
  return report.all_passed() ? 0 : kViolation;
}

struct ExperimentOptions {
  std::string config_path;
  std::string experiment;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replications, samples, threads, chains;
  std::optional<std::string> output;
  std::string summary;
  bool print_config = false;
};

int experiment(const ExperimentOptions& o) {
  ExperimentConfig config;
  if (!o.config_path.empty()) {
    config = load_config(o.config_path);
    if (!o.experiment.empty() && parse_experiment_id(o.experiment) != config.experiment) {
      config = ExperimentConfig::defaults(parse_experiment_id(o.experiment));
    }
  } else if (!o.experiment.empty()) {
    config = ExperimentConfig::defaults(parse_experiment_id(o.experiment));
  } else {
    throw ConfigError("experiment needs --config or --experiment");
  }
  if (o.seed) config.seed = *o.seed;
  if (o.replications) config.replications = *o.replications;
  if (o.samples) config.samples = *o.samples;
  if (o.threads) config.threads = *o.threads;
  if (o.chains) config.chains = *o.chains;
  if (o.output) config.output = *o.output;
  config.validate();

  if (o.print_config) {
    std::cout << config_to_json(config);
    return 0;
  }
  switch (config.experiment) {
    case ExperimentId::OracleSuite: return report_oracle(config);
    case ExperimentId::Examples: return report_examples(config);
    case ExperimentId::Zellner:
    case ExperimentId::FlatLogistic: break;
  }
  const ExperimentResult result =
      config.experiment == ExperimentId::Zellner ? run_zellner(config) : run_flat_logistic(config);
  {
    Sink sink(config.output);
    write_rows_csv(sink.stream(), result.rows);
  }
  if (!o.summary.empty()) {
    Sink sink(o.summary);
    write_summary_csv(sink.stream(), result.summary);
  }
  return 0;
}

struct DataOptions {
  std::size_t n = 100;
  std::size_t d = 10;
  std::uint64_t seed = 1;
  std::string mechanism = "logistic";
  std::string output;
};

int generate_data(const DataOptions& o) {
  RandomStream stream(o.seed);
  const LogisticData data = generate_logistic_data(stream, o.n, o.d, parse_y_mechanism(o.mechanism));
  Sink sink(o.output);
  auto& out = sink.stream();
  out << "y";
  for (std::size_t j = 1; j <= o.d; ++j) out << ",x" << j;
  out << '\n';
  for (std::size_t i = 0; i < data.n(); ++i) {
    out << data.y[i];
    for (std::size_t j = 0; j < o.d; ++j) out << ',' << format_number(data.x(i, j));
    out << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lower bounds on the convergence rate of accept-reject Markov chains"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  EstimateOptions est;
  auto* est_cmd = app.add_subcommand("estimate-accept", "Monte Carlo acceptance probability at a point");
  est_cmd->set_help_flag("--help", "Print this help message and exit");
  est_cmd->add_option("--target", est.target, "gaussian | mixture | subexp");
  est_cmd->add_option("--sigma2", est.sigma2, "Gaussian target variance");
  est_cmd->add_option("--d", est.d, "Gaussian target dimension");
  est_cmd->add_option("--b", est.b, "Mixture anisotropy b > 1");
  est_cmd->add_option("--proposal", est.proposal, "rw | mala | cn | independence");
  est_cmd->add_option("--h", est.h, "Proposal scale h");
  est_cmd->add_option("--rule", est.rule, "mh | barker | portkey | nr-cn");
  est_cmd->add_option("--delta", est.delta, "Portkey penalty δ");
  est_cmd->add_option("--at", est.at, "Evaluation point (comma separated; one value is broadcast)")
      ->delimiter(',');
  est_cmd->add_option("--n", est.n, "Monte Carlo draws");
  est_cmd->add_option("--seed", est.seed, "Random seed");

  CurveOptions curve;
  auto* curve_cmd = app.add_subcommand("bound-curve", "Lower-bound curve as CSV (t,lower_bound)");
  curve_cmd->add_option("--kind", curve.kind, "tv | wasserstein");
  curve_cmd->add_option("--accept", curve.accept, "Acceptance probability A in [0,1]")->required();
  curve_cmd->add_option("--horizon", curve.horizon, "Number of steps");
  curve_cmd->add_option("--d", curve.d, "Dimension (wasserstein)");
  curve_cmd->add_option("--c0", curve.c0, "Norm-equivalence constant C0 (wasserstein)");
  curve_cmd->add_option("--sup-density", curve.sup_density, "Upper bound s on the target density (wasserstein)");

  ExperimentOptions exp;
  auto* exp_cmd = app.add_subcommand("experiment", "Run a simulation study from a JSON config");
  exp_cmd->add_option("--config", exp.config_path, "JSON config file")->check(CLI::ExistingFile);
  exp_cmd->add_option("--experiment", exp.experiment, "zellner | flat-logistic | oracle-suite | examples");
  exp_cmd->add_option("--seed", exp.seed, "Override the config seed (default 1)");
  exp_cmd->add_option("--replications", exp.replications, "Override replications (default 10)");
  exp_cmd->add_option("--samples", exp.samples, "Override MC draws (default 1000)");
  exp_cmd->add_option("--threads", exp.threads, "Worker threads (default 0 = hardware)");
  exp_cmd->add_option("--chains", exp.chains, "Oracle-suite chain count (default 500)");
  exp_cmd->add_option("--output", exp.output, "Row CSV path (default stdout)");
  exp_cmd->add_option("--summary", exp.summary, "Summary CSV path (default none)");
  exp_cmd->add_flag("--print-config", exp.print_config, "Print the resolved config as JSON and exit");

  ExperimentConfig oracle_config = ExperimentConfig::defaults(ExperimentId::OracleSuite);
  auto* oracle_cmd = app.add_subcommand("oracle", "Finite-chain verification suite (exit 2 on violation)");
  oracle_cmd->add_option("--chains", oracle_config.chains, "Random chains");
  oracle_cmd->add_option("--seed", oracle_config.seed, "Random seed");
  oracle_cmd->add_option("--horizon", oracle_config.horizon, "Steps per chain");
  oracle_cmd->add_option("--threads", oracle_config.threads, "Worker threads (0 = hardware)");
  oracle_cmd->add_option("--output", oracle_config.output, "Per-chain CSV path (default stdout)");

  ExperimentConfig examples_config = ExperimentConfig::defaults(ExperimentId::Examples);
  auto* examples_cmd = app.add_subcommand("examples", "Worked-example inequalities (exit 2 on failure)");
  examples_cmd->add_option("--samples", examples_config.samples, "Monte Carlo draws");
  examples_cmd->add_option("--seed", examples_config.seed, "Random seed");
  examples_cmd->add_option("--output", examples_config.output, "CSV path (default stdout)");

  DataOptions data;
  auto* data_cmd = app.add_subcommand("generate-data", "Synthetic logistic-regression data as CSV");
  data_cmd->add_option("--n", data.n, "Observations");
  data_cmd->add_option("--d", data.d, "Covariates");
  data_cmd->add_option("--seed", data.seed, "Random seed");
  data_cmd->add_option("--mechanism", data.mechanism, "logistic | fair-coin");
  data_cmd->add_option("--output", data.output, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*est_cmd) return estimate_accept(est);
    if (*curve_cmd) return bound_curve(curve);
    if (*exp_cmd) return experiment(exp);
    if (*oracle_cmd) {
      oracle_config.validate();
      return report_oracle(oracle_config);
    }
    if (*examples_cmd) {
      examples_config.validate();
      return report_examples(examples_config);
    }
    if (*data_cmd) return generate_data(data);
  } catch (const VerificationFailure& e) {
    std::cerr << "arblobo: verification failure: " << e.what() << "\n";
    return kViolation;
  } catch (const Error& e) {
    std::cerr << "arblobo: error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
