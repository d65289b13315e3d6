#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "arblobo/kernels.hpp"
#include "arblobo/linalg.hpp"
#include "arblobo/oracle.hpp"
#include "arblobo/random.hpp"
#include "arblobo/targets.hpp"

namespace arblobo {

enum class ExperimentId { Zellner, FlatLogistic, OracleSuite, Examples };

std::string_view to_string(ExperimentId id);
ExperimentId parse_experiment_id(std::string_view text);

/// Proposal scale as a function of (d, n): const(c), opt_scale(c) = c/d,
/// inv_dn(c) = c/(dn), inv_n(c) = c/n.
struct HRule {
  enum class Form { Const, OptScale, InvDn, InvN };
  Form form = Form::Const;
  double c = 1.0;

  /// Throws ConfigError on malformed text or c ≤ 0.
  static HRule parse(std::string_view text);
  std::string name() const;
  double evaluate(std::size_t d, std::size_t n) const;

  bool operator==(const HRule&) const = default;
};

enum class YMechanism { Logistic, FairCoin };

std::string_view to_string(YMechanism mechanism);
YMechanism parse_y_mechanism(std::string_view text);

struct GridPoint {
  std::size_t d = 0;
  std::size_t n = 0;
  bool operator==(const GridPoint&) const = default;
};

struct ExperimentConfig {
  ExperimentId experiment = ExperimentId::Zellner;
  std::size_t replications = 10;
  /// Monte Carlo draws per acceptance estimate.
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  std::vector<HRule> h_rules;
  std::vector<GridPoint> grid;
  double g = 10.0;
  YMechanism y_mechanism = YMechanism::Logistic;
  /// Oracle suite only.
  std::size_t chains = 500;
  std::size_t horizon = 30;
  /// 0 picks the hardware concurrency (capped by ARBLOBO_THREADS).
  std::size_t threads = 0;
  /// Empty means standard output.
  std::string output;

  /// Defaults for the given experiment.
  static ExperimentConfig defaults(ExperimentId id);
  /// Throws ConfigError on an invalid combination.
  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Worker count: `requested` (or the hardware concurrency when 0), capped by
/// ARBLOBO_THREADS and by `jobs`.
std::size_t resolve_threads(std::size_t requested, std::size_t jobs);

/// X entries i.i.d. Unif(−1, 1). Y is Bernoulli(s(Xβ_true)) for the
/// logistic mechanism (β_true defaults to (1,…,1)/√d) or a fair coin.
LogisticData generate_logistic_data(RandomStream& stream, std::size_t n, std::size_t d,
                                    YMechanism mechanism = YMechanism::Logistic,
                                    std::optional<Vector> beta_true = std::nullopt);

struct ExperimentRow {
  std::string experiment;
  std::size_t replication = 0;
  std::size_t d = 0;
  std::size_t n = 0;
  std::string h_rule;
  double h = 0.0;
  double accept_mean = 0.0;
  double accept_se = 0.0;
  double log_accept = 0.0;
  double rate_lb = 0.0;
  /// Empirical Zellner bound, or the concentration bound with estimated λ₀.
  double closed_form_ub = 0.0;
  /// Zellner only: asymptotic bound with γ = d/n.
  double asymptotic_ub = 0.0;
  /// λ_min(XᵀX) (Zellner) or λ_min of the negative log-likelihood Hessian at the MLE.
  double curvature = 0.0;
  std::size_t optimizer_iterations = 0;
  double wall_seconds = 0.0;
  /// "ok", "regenerated:k" or a failure tag.
  std::string flag = "ok";

  bool valid() const;
};

struct SummaryRow {
  std::string experiment;
  std::size_t d = 0;
  std::size_t n = 0;
  std::string h_rule;
  std::size_t count = 0;
  double mean_rate_lb = 0.0;
  double sd_rate_lb = 0.0;
  double mean_log_accept = 0.0;
  double sd_log_accept = 0.0;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  std::vector<SummaryRow> summary;
};

ExperimentResult run_zellner(const ExperimentConfig& config);
ExperimentResult run_flat_logistic(const ExperimentConfig& config);

/// Mean and sample sd of the valid rows per (grid point, h-rule), in row order.
std::vector<SummaryRow> summarize(const std::vector<ExperimentRow>& rows);

/// Shortest round-trip decimal form.
std::string format_number(double value);

void write_rows_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& summary);

struct ExampleCheck {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  /// Allowed excess over the bound (a quadrature tolerance or 3 standard errors).
  double slack = 0.0;
  bool passed = false;
};

struct ExamplesReport {
  std::vector<ExampleCheck> checks;
  bool all_passed() const;
};

ExamplesReport run_examples(const ExperimentConfig& config);
void write_examples_csv(std::ostream& out, const ExamplesReport& report);

/// A(θ) = ∫ a(θ,θ') q(θ,θ') dθ' by Gauss–Legendre quadrature, 1-D Gaussian proposals only.
double quadrature_acceptance_1d(const ArbKernel& kernel, double theta);

/// Random finite chain with m ∈ [2, 12] states, 1-D coordinates in (0, 2) and
/// an MH, Barker or portkey rule chosen by `index`.
FiniteChain random_finite_chain(RandomStream& stream, std::size_t index);

struct OracleChainRow {
  std::size_t chain = 0;
  std::size_t m = 0;
  std::string rule;
  double tv_worst_margin = 0.0;
  double gap = 0.0;
  double beta = 0.0;
  double conductance = 0.0;
  double singleton_bound = 0.0;
  double fitted_rate = 0.0;
  bool tv_ok = false;
  bool lawler_sokal_ok = false;
  bool singleton_ok = false;
  bool w_rate_ok = false;
};

struct OracleSuiteReport {
  std::vector<OracleChainRow> rows;
  std::size_t tv_violations = 0;
  std::size_t lawler_sokal_violations = 0;
  std::size_t singleton_violations = 0;
  std::size_t w_rate_failures = 0;
  /// Two-state worked example reproduces the hand values.
  bool two_state_ok = false;

  bool ok() const;
};

/// Theorem-check, Lawler–Sokal, singleton-conductance and W-rate suites over
/// `config.chains` random chains with horizon `config.horizon`.
OracleSuiteReport run_oracle_suite(const ExperimentConfig& config);
void write_oracle_csv(std::ostream& out, const OracleSuiteReport& report);

}  // namespace arblobo
