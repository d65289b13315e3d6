#include "arblobo/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cctype>
#include <cstdlib>
#include <exception>
#include <limits>
#include <ostream>
#include <thread>
#include <tuple>

#include "arblobo/bounds.hpp"
#include "arblobo/errors.hpp"
#include "arblobo/optimize.hpp"
#include "arblobo/proposals.hpp"
#include "arblobo/quadrature.hpp"

namespace arblobo {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kMaxDataAttempts = 20;
constexpr std::uint64_t kMcStreamOffset = 1000;
/// |xᵢᵀβ̂| beyond this means the fit pushed a probability to within ~3e-7 of
/// 0 or 1, which only happens when the data are (quasi-)separated.
constexpr double kSeparationMargin = 15.0;

template <class Fn>
void parallel_for(std::size_t jobs, std::size_t requested_threads, Fn&& fn) {
  const std::size_t workers = resolve_threads(requested_threads, jobs);
  if (workers <= 1) {
    for (std::size_t k = 0; k < jobs; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs && !failed; k = next++) {
      try {
        fn(k);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

OptimizerResult find_mode(const TargetDensity& target, std::size_t d) {
  Objective f = [&](std::span<const double> x) { return -target.log_density(x); };
  Gradient grad = [&](std::span<const double> x) {
    Vector g = target.grad_log_density(x);
    for (double& v : g) v = -v;
    return g;
  };
  return gradient_descent(f, grad, Vector(d, 0.0));
}

double max_abs_linear_predictor(const LogisticData& data, std::span<const double> beta) {
  double worst = 0.0;
  for (std::size_t i = 0; i < data.n(); ++i) worst = std::max(worst, std::abs(dot(data.x.row(i), beta)));
  return worst;
}

ExperimentRow failed_row(std::string_view experiment, std::size_t rep, GridPoint gp, const HRule& rule,
                         std::string flag) {
  ExperimentRow row;
  row.experiment = experiment;
  row.replication = rep;
  row.d = gp.d;
  row.n = gp.n;
  row.h_rule = rule.name();
  row.h = rule.evaluate(gp.d, gp.n);
  row.accept_mean = row.accept_se = row.log_accept = row.rate_lb = row.closed_form_ub = kNaN;
  row.asymptotic_ub = row.curvature = kNaN;
  row.flag = std::move(flag);
  return row;
}

// Fills the acceptance columns of `row` from an MC run at `mode`.
void estimate_row(ExperimentRow& row, const TargetDensity& target, std::span<const double> mode,
                  std::size_t samples, RandomStream stream) {
  const std::size_t d = target.dim();
  const ArbKernel kernel(target, make_rw_gaussian(row.h, Matrix::identity(d)),
                         AcceptanceRule::metropolis_hastings());
  const AcceptanceEstimate est = mc_acceptance(kernel, mode, samples, stream);
  row.accept_mean = est.mean;
  row.accept_se = est.std_err;
  row.log_accept = std::log(est.mean);
  row.rate_lb = 1.0 - est.mean;
}

using RowsPerJob = std::vector<std::vector<ExperimentRow>>;

ExperimentResult collect(RowsPerJob per_job) {
  ExperimentResult result;
  for (auto& rows : per_job)
    for (auto& row : rows) result.rows.push_back(std::move(row));
  result.summary = summarize(result.rows);
  return result;
}

std::vector<ExperimentRow> zellner_job(const ExperimentConfig& config, GridPoint gp, std::size_t rep,
                                       RandomStream stream) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<ExperimentRow> rows;
  std::optional<TargetDensity> target;
  LogisticData data;
  std::size_t attempt = 0;
  for (; attempt < kMaxDataAttempts && !target; ++attempt) {
    RandomStream data_stream = stream.substream(attempt);
    data = generate_logistic_data(data_stream, gp.n, gp.d, config.y_mechanism);
    try {
      target = make_logistic_zellner(data, config.g);
    } catch (const NotPositiveDefinite&) {
    }
  }
  if (!target) {
    for (const auto& rule : config.h_rules) rows.push_back(failed_row("zellner", rep, gp, rule, "singular_design"));
    return rows;
  }

  OptimizerResult mode;
  try {
    mode = find_mode(*target, gp.d);
  } catch (const Error&) {
    for (const auto& rule : config.h_rules) rows.push_back(failed_row("zellner", rep, gp, rule, "optimizer_failed"));
    return rows;
  }

  const double lambda_min = sym_eigen(gram(data.x)).values.back();
  const double gamma = static_cast<double>(gp.d) / static_cast<double>(gp.n);
  for (std::size_t r = 0; r < config.h_rules.size(); ++r) {
    ExperimentRow row;
    row.experiment = "zellner";
    row.replication = rep;
    row.d = gp.d;
    row.n = gp.n;
    row.h_rule = config.h_rules[r].name();
    row.h = config.h_rules[r].evaluate(gp.d, gp.n);
    estimate_row(row, *target, mode.minimizer, config.samples, stream.substream(kMcStreamOffset + r));
    row.closed_form_ub = zellner_empirical_accept_ub(row.h, lambda_min, config.g, gp.d).value;
    row.asymptotic_ub = zellner_accept_ub(row.h, gp.n, gamma, config.g, gp.d).value;
    row.curvature = lambda_min;
    row.optimizer_iterations = mode.iterations;
    if (attempt > 1) row.flag = "regenerated:" + std::to_string(attempt - 1);
    rows.push_back(std::move(row));
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (auto& row : rows) row.wall_seconds = seconds;
  return rows;
}

std::vector<ExperimentRow> flat_job(const ExperimentConfig& config, GridPoint gp, std::size_t rep,
                                    RandomStream stream) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<ExperimentRow> rows;
  std::optional<TargetDensity> target;
  OptimizerResult mle;
  std::size_t attempt = 0;
  for (; attempt < kMaxDataAttempts && !target; ++attempt) {
    RandomStream data_stream = stream.substream(attempt);
    const LogisticData data = generate_logistic_data(data_stream, gp.n, gp.d, config.y_mechanism);
    try {
      TargetDensity candidate = make_logistic_flat(data);
      mle = find_mode(candidate, gp.d);
      if (max_abs_linear_predictor(data, mle.minimizer) > kSeparationMargin) continue;
      target = std::move(candidate);
    } catch (const RankDeficient&) {
    } catch (const DivergenceSuspected&) {
    } catch (const MaxIterExceeded&) {
    }
  }
  if (!target) {
    for (const auto& rule : config.h_rules) rows.push_back(failed_row("flat-logistic", rep, gp, rule, "separated"));
    return rows;
  }

  const double lambda_min = smallest_hessian_eigenvalue(*target, mle.minimizer);
  LaplaceParams params;
  params.lambda0 = static_cast<double>(gp.n) / lambda_min;
  params.c = 1.0;
  params.n = gp.n;
  params.d = gp.d;
  for (std::size_t r = 0; r < config.h_rules.size(); ++r) {
    ExperimentRow row;
    row.experiment = "flat-logistic";
    row.replication = rep;
    row.d = gp.d;
    row.n = gp.n;
    row.h_rule = config.h_rules[r].name();
    row.h = config.h_rules[r].evaluate(gp.d, gp.n);
    estimate_row(row, *target, mle.minimizer, config.samples, stream.substream(kMcStreamOffset + r));
    row.closed_form_ub = concentration_gaussian_accept_ub(params, row.h).value;
    row.asymptotic_ub = kNaN;
    row.curvature = lambda_min;
    row.optimizer_iterations = mle.iterations;
    if (attempt > 1) row.flag = "regenerated:" + std::to_string(attempt - 1);
    rows.push_back(std::move(row));
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (auto& row : rows) row.wall_seconds = seconds;
  return rows;
}

template <class Job>
ExperimentResult run_grid(const ExperimentConfig& config, Job job) {
  config.validate();
  const std::size_t reps = config.replications;
  const std::size_t jobs = config.grid.size() * reps;
  RowsPerJob per_job(jobs);
  const RandomStream root(config.seed);
  parallel_for(jobs, config.threads, [&](std::size_t k) {
    const std::size_t gi = k / reps, rep = k % reps;
    per_job[k] = job(config, config.grid[gi], rep, root.substream(gi).substream(rep));
  });
  return collect(std::move(per_job));
}

}  // namespace

std::string_view to_string(ExperimentId id) {
  switch (id) {
    case ExperimentId::Zellner: return "zellner";
    case ExperimentId::FlatLogistic: return "flat-logistic";
    case ExperimentId::OracleSuite: return "oracle-suite";
    case ExperimentId::Examples: return "examples";
  }
  return "unknown";
}

ExperimentId parse_experiment_id(std::string_view text) {
  for (auto id : {ExperimentId::Zellner, ExperimentId::FlatLogistic, ExperimentId::OracleSuite,
                  ExperimentId::Examples})
    if (to_string(id) == text) return id;
  throw ConfigError("unknown experiment '" + std::string(text) +
                    "' (expected zellner, flat-logistic, oracle-suite or examples)");
}

std::string_view to_string(YMechanism mechanism) {
  return mechanism == YMechanism::Logistic ? "logistic" : "fair-coin";
}

YMechanism parse_y_mechanism(std::string_view text) {
  if (text == "logistic") return YMechanism::Logistic;
  if (text == "fair-coin") return YMechanism::FairCoin;
  throw ConfigError("unknown y mechanism '" + std::string(text) + "' (expected logistic or fair-coin)");
}

HRule HRule::parse(std::string_view text) {
  const std::string_view t = trim(text);
  const auto open = t.find('(');
  if (open == std::string_view::npos || t.back() != ')') {
    throw ConfigError("malformed h-rule '" + std::string(text) + "' (expected form(c))");
  }
  const std::string_view form = trim(t.substr(0, open));
  const std::string_view arg = trim(t.substr(open + 1, t.size() - open - 2));
  HRule rule;
  if (form == "const") {
    rule.form = Form::Const;
  } else if (form == "opt_scale") {
    rule.form = Form::OptScale;
  } else if (form == "inv_dn") {
    rule.form = Form::InvDn;
  } else if (form == "inv_n") {
    rule.form = Form::InvN;
  } else {
    throw ConfigError("unknown h-rule form '" + std::string(form) + "'");
  }
  const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), rule.c);
  if (ec != std::errc() || ptr != arg.data() + arg.size()) {
    throw ConfigError("h-rule '" + std::string(text) + "' has a non-numeric parameter");
  }
  if (!(rule.c > 0.0) || !std::isfinite(rule.c)) {
    throw ConfigError("h-rule '" + std::string(text) + "' must have a positive parameter");
  }
  return rule;
}

std::string HRule::name() const {
  std::string_view form_name;
  switch (form) {
    case Form::Const: form_name = "const"; break;
    case Form::OptScale: form_name = "opt_scale"; break;
    case Form::InvDn: form_name = "inv_dn"; break;
    case Form::InvN: form_name = "inv_n"; break;
  }
  return std::string(form_name) + "(" + format_number(c) + ")";
}

double HRule::evaluate(std::size_t d, std::size_t n) const {
  const double dd = static_cast<double>(d), nn = static_cast<double>(n);
  switch (form) {
    case Form::Const: return c;
    case Form::OptScale: return c / dd;
    case Form::InvDn: return c / (dd * nn);
    case Form::InvN: return c / nn;
  }
  return c;
}

ExperimentConfig ExperimentConfig::defaults(ExperimentId id) {
  ExperimentConfig c;
  c.experiment = id;
  switch (id) {
    case ExperimentId::Zellner:
      c.grid = {{2, 8}, {4, 16}, {4, 24}, {8, 32}, {10, 40}, {12, 48}, {14, 56}};
      c.h_rules = {HRule::parse("opt_scale(5.6644)"), HRule::parse("const(0.6)"), HRule::parse("inv_dn(1)")};
      break;
    case ExperimentId::FlatLogistic:
      c.grid = {{10, 100}, {10, 200}, {10, 300}, {10, 400}};
      c.h_rules = {HRule::parse("inv_n(5)"), HRule::parse("inv_n(1)"), HRule::parse("inv_n(0.1)"),
                   HRule::parse("const(0.1)")};
      break;
    case ExperimentId::OracleSuite:
      break;
    case ExperimentId::Examples:
      c.samples = 100000;
      break;
  }
  return c;
}

void ExperimentConfig::validate() const {
  if (replications < 1) throw ConfigError("replications must be >= 1");
  if (samples < 2) throw ConfigError("samples must be >= 2");
  if (!(g > 0.0) || !std::isfinite(g)) throw ConfigError("g must be positive");
  if (experiment == ExperimentId::Zellner || experiment == ExperimentId::FlatLogistic) {
    if (grid.empty()) throw ConfigError("grid must not be empty");
    if (h_rules.empty()) throw ConfigError("h_rules must not be empty");
    for (const auto& gp : grid) {
      if (gp.d < 1 || gp.n <= gp.d) throw ConfigError("grid points need n > d >= 1");
      for (const auto& rule : h_rules) {
        const double h = rule.evaluate(gp.d, gp.n);
        if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("h-rule " + rule.name() + " is not positive");
      }
    }
  }
  if (experiment == ExperimentId::OracleSuite) {
    if (chains < 1) throw ConfigError("chains must be >= 1");
    if (horizon < 2) throw ConfigError("horizon must be >= 2");
  }
}

std::size_t resolve_threads(std::size_t requested, std::size_t jobs) {
  std::size_t n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ARBLOBO_THREADS")) {
    std::size_t cap = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), cap);
    if (ec == std::errc() && ptr == s.data() + s.size() && cap > 0) n = std::min(n, cap);
  }
  return std::max<std::size_t>(1, std::min(n, jobs));
}

LogisticData generate_logistic_data(RandomStream& stream, std::size_t n, std::size_t d, YMechanism mechanism,
                                    std::optional<Vector> beta_true) {
  if (d < 1 || n <= d) throw InvalidArgument("generate_logistic_data: need n > d >= 1");
  Vector beta = beta_true ? *beta_true : Vector(d, 1.0 / std::sqrt(static_cast<double>(d)));
  if (beta.size() != d) throw DimensionMismatch("generate_logistic_data: β_true has wrong length");
  LogisticData data;
  data.x = Matrix(n, d);
  data.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) data.x(i, j) = 2.0 * stream.uniform() - 1.0;
    const double p = mechanism == YMechanism::Logistic ? sigmoid(dot(data.x.row(i), beta)) : 0.5;
    data.y[i] = stream.uniform() < p ? 1 : 0;
  }
  return data;
}

bool ExperimentRow::valid() const { return std::isfinite(accept_mean) && accept_mean > 0.0; }

ExperimentResult run_zellner(const ExperimentConfig& config) { return run_grid(config, zellner_job); }

ExperimentResult run_flat_logistic(const ExperimentConfig& config) { return run_grid(config, flat_job); }

std::vector<SummaryRow> summarize(const std::vector<ExperimentRow>& rows) {
  std::vector<SummaryRow> out;
  std::vector<std::vector<const ExperimentRow*>> groups;
  for (const auto& row : rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const SummaryRow& s) {
      return s.experiment == row.experiment && s.d == row.d && s.n == row.n && s.h_rule == row.h_rule;
    });
    if (it == out.end()) {
      out.push_back({row.experiment, row.d, row.n, row.h_rule});
      groups.emplace_back();
      it = out.end() - 1;
    }
    if (row.valid()) groups[static_cast<std::size_t>(it - out.begin())].push_back(&row);
  }
  auto mean_sd = [](const std::vector<const ExperimentRow*>& g, double ExperimentRow::*field) {
    if (g.empty()) return std::pair{kNaN, kNaN};
    double m = 0.0;
    for (const auto* r : g) m += r->*field;
    m /= static_cast<double>(g.size());
    if (g.size() < 2) return std::pair{m, 0.0};
    double ss = 0.0;
    for (const auto* r : g) ss += (r->*field - m) * (r->*field - m);
    return std::pair{m, std::sqrt(ss / static_cast<double>(g.size() - 1))};
  };
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k].count = groups[k].size();
    std::tie(out[k].mean_rate_lb, out[k].sd_rate_lb) = mean_sd(groups[k], &ExperimentRow::rate_lb);
    std::tie(out[k].mean_log_accept, out[k].sd_log_accept) = mean_sd(groups[k], &ExperimentRow::log_accept);
  }
  return out;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void write_rows_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  out << "experiment,replication,d,n,h_rule,h,accept_mean,accept_se,log_accept,rate_lb,closed_form_ub,flag\n";
  for (const auto& r : rows) {
    out << r.experiment << ',' << r.replication << ',' << r.d << ',' << r.n << ',' << r.h_rule << ','
        << format_number(r.h) << ',' << format_number(r.accept_mean) << ',' << format_number(r.accept_se) << ','
        << format_number(r.log_accept) << ',' << format_number(r.rate_lb) << ','
        << format_number(r.closed_form_ub) << ',' << r.flag << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& summary) {
  out << "experiment,d,n,h_rule,count,mean_rate_lb,sd_rate_lb,mean_log_accept,sd_log_accept\n";
  for (const auto& s : summary) {
    out << s.experiment << ',' << s.d << ',' << s.n << ',' << s.h_rule << ',' << s.count << ','
        << format_number(s.mean_rate_lb) << ',' << format_number(s.sd_rate_lb) << ','
        << format_number(s.mean_log_accept) << ',' << format_number(s.sd_log_accept) << '\n';
  }
}

double quadrature_acceptance_1d(const ArbKernel& kernel, double theta) {
  if (kernel.dim() != 1) throw InvalidArgument("quadrature_acceptance_1d: 1-D kernels only");
  const auto& proposal = kernel.proposal();
  if (proposal.dof()) throw InvalidArgument("quadrature_acceptance_1d: Gaussian proposals only");
  const double center = proposal.mean(std::span(&theta, 1))[0];
  const double sd = proposal.scale_factor()(0, 0);
  auto integrand = [&](double y) {
    const double lq = proposal.log_q(std::span(&theta, 1), std::span(&y, 1));
    if (lq == -std::numeric_limits<double>::infinity()) return 0.0;
    return kernel.accept_prob(std::span(&theta, 1), std::span(&y, 1)) * std::exp(lq);
  };
  // Split at the center and at ±θ where the acceptance function has kinks.
  std::vector<double> cuts{center - 12.0 * sd, center, center + 12.0 * sd, theta, -theta};
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::remove_if(cuts.begin(), cuts.end(),
                            [&](double c) { return c < center - 12.0 * sd || c > center + 12.0 * sd; }),
             cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) total += quadrature_1d(integrand, cuts[k], cuts[k + 1], 200);
  return total;
}

bool ExamplesReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ExampleCheck& c) { return c.passed; });
}

ExamplesReport run_examples(const ExperimentConfig& config) {
  ExamplesReport report;
  const RandomStream root(config.seed);
  auto add = [&](std::string name, double value, double bound, double slack) {
    report.checks.push_back({std::move(name), value, bound, slack, value <= bound + slack});
  };

  {
    const double sigma2 = 4.0, h = 0.5, theta = 1.0;
    const TargetDensity target = make_gaussian(sigma2, 1);
    const ProposalFamily cn = make_crank_nicolson(h, 1);
    const ArbKernel nr(target, cn, AcceptanceRule::nonreversible_cn(sigma2));
    const ArbKernel mh(target, cn, AcceptanceRule::metropolis_hastings());
    const double a_nr = quadrature_acceptance_1d(nr, theta);
    const double a_mh = quadrature_acceptance_1d(mh, theta);
    add("cn_nonreversible_vs_mh", a_nr, 0.5 + a_mh, 1e-8);
  }
  {
    const double b = 2.0, h = 1.0;
    const ArbKernel kernel(make_gaussian_mixture_2d(b), make_rw_gaussian(h, Matrix::identity(2)),
                           AcceptanceRule::metropolis_hastings());
    RandomStream stream = root.substream(1);
    const Vector origin{0.0, 0.0};
    const auto est = mc_acceptance(kernel, origin, config.samples, stream);
    add("mixture_origin", est.mean, mixture_accept_ub(b, h, 0.0, 0.0).value, 3.0 * est.std_err);
  }
  {
    const double h = 2.0;
    const RandomScanKernel kernel = make_subexponential_rs_kernel(h);
    RandomStream stream = root.substream(2);
    const Vector origin{0.0, 0.0};
    const auto rs = rs_component_acceptances(kernel, origin, config.samples, stream);
    double var = 0.0;
    for (std::size_t k = 0; k < rs.components.size(); ++k) {
      const double lk = kernel.probabilities()[k];
      var += lk * lk * rs.components[k].std_err * rs.components[k].std_err;
    }
    add("hybrid_random_scan", rs.combined, 1.0 / std::sqrt(2.0 * h), 3.0 * std::sqrt(var));
  }
  return report;
}

void write_examples_csv(std::ostream& out, const ExamplesReport& report) {
  out << "example,value,bound,slack,passed\n";
  for (const auto& c : report.checks) {
    out << c.name << ',' << format_number(c.value) << ',' << format_number(c.bound) << ','
        << format_number(c.slack) << ',' << (c.passed ? "true" : "false") << '\n';
  }
}

FiniteChain random_finite_chain(RandomStream& stream, std::size_t index) {
  const std::size_t m = 2 + static_cast<std::size_t>(stream.next_u64() % 11);
  Vector pi(m);
  double total = 0.0;
  for (double& p : pi) {
    p = std::exp(1.5 * stream.normal());
    total += p;
  }
  for (double& p : pi) p /= total;

  Matrix q(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const bool zero = j != i && stream.uniform() < 0.3;
      q(i, j) = zero ? 0.0 : stream.uniform();
      row += q(i, j);
    }
    for (std::size_t j = 0; j < m; ++j) q(i, j) /= row;
  }

  Matrix coords(m, 1);
  for (std::size_t i = 0; i < m; ++i) coords(i, 0) = 2.0 * stream.uniform();

  AcceptanceRule rule;
  switch (index % 3) {
    case 0: rule = AcceptanceRule::metropolis_hastings(); break;
    case 1: rule = AcceptanceRule::barker(); break;
    default: rule = AcceptanceRule::portkey_barker(0.5); break;
  }
  return build_finite_arb(std::move(pi), std::move(q), rule, std::move(coords));
}

bool OracleSuiteReport::ok() const {
  return two_state_ok && tv_violations == 0 && lawler_sokal_violations == 0 && singleton_violations == 0 &&
         w_rate_failures == 0;
}

OracleSuiteReport run_oracle_suite(const ExperimentConfig& config) {
  config.validate();
  OracleSuiteReport report;

  {
    const FiniteChain two = build_finite_arb({2.0 / 3.0, 1.0 / 3.0}, Matrix(2, 2, 0.5),
                                             AcceptanceRule::metropolis_hastings());
    const auto tv = exact_tv_curve(two, 0, 1);
    const auto sg = spectral_gap(two);
    report.two_state_ok = std::abs(two.transition()(0, 0) - 0.75) < 1e-12 &&
                          std::abs(two.transition()(1, 0) - 0.5) < 1e-12 &&
                          std::abs(two.off_diagonal_acceptance()[0] - 0.25) < 1e-12 &&
                          std::abs(tv[0] - 1.0 / 12.0) < 1e-12 && std::abs(sg.gap - 0.75) < 1e-12;
  }

  report.rows.resize(config.chains);
  const RandomStream root(config.seed);
  parallel_for(config.chains, config.threads, [&](std::size_t k) {
    RandomStream stream = root.substream(k);
    const FiniteChain chain = random_finite_chain(stream, k);
    OracleChainRow& row = report.rows[k];
    row.chain = k;
    row.m = chain.size();
    row.rule = std::string(to_string(chain.rule().kind));
    try {
      row.tv_worst_margin = finite_tv_theorem_check(chain, config.horizon).worst_margin;
      row.tv_ok = true;
    } catch (const VerificationFailure&) {
      row.tv_worst_margin = kNaN;
    }
    const SpectralGap sg = spectral_gap(chain);
    row.gap = sg.gap;
    row.beta = sg.beta;
    row.conductance = conductance(chain).value;
    row.singleton_bound = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < chain.size(); ++i) {
      row.singleton_bound = std::min(row.singleton_bound,
                                     chain.off_diagonal_acceptance()[i] / (1.0 - chain.stationary()[i]));
    }
    row.lawler_sokal_ok = row.gap <= row.conductance + 1e-10;
    row.singleton_ok = row.conductance <= row.singleton_bound + 1e-10;
    const EquivalenceReport eq = finite_equiv_illustration(chain, config.horizon);
    row.fitted_rate = eq.fitted_rate;
    row.w_rate_ok = eq.passed;
  });
  for (const auto& row : report.rows) {
    report.tv_violations += !row.tv_ok;
    report.lawler_sokal_violations += !row.lawler_sokal_ok;
    report.singleton_violations += !row.singleton_ok;
    report.w_rate_failures += !row.w_rate_ok;
  }
  return report;
}

void write_oracle_csv(std::ostream& out, const OracleSuiteReport& report) {
  out << "chain,m,rule,tv_worst_margin,gap,beta,conductance,singleton_bound,fitted_rate,tv_ok,lawler_sokal_ok,"
         "singleton_ok,w_rate_ok\n";
  auto b = [](bool v) { return v ? "true" : "false"; };
  for (const auto& r : report.rows) {
    out << r.chain << ',' << r.m << ',' << r.rule << ',' << format_number(r.tv_worst_margin) << ','
        << format_number(r.gap) << ',' << format_number(r.beta) << ',' << format_number(r.conductance) << ','
        << format_number(r.singleton_bound) << ',' << format_number(r.fitted_rate) << ',' << b(r.tv_ok) << ','
        << b(r.lawler_sokal_ok) << ',' << b(r.singleton_ok) << ',' << b(r.w_rate_ok) << '\n';
  }
}

}  // namespace arblobo
