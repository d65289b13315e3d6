// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "arblobo/bounds.hpp"
#include "arblobo/errors.hpp"
#include "arblobo/experiments.hpp"
#include "arblobo/kernels.hpp"
#include "arblobo/oracle.hpp"
#include "arblobo/wasserstein_1d.hpp"
#include "transport_oracle.hpp"

using namespace arblobo;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// CSV text of the parallel runs, kept for the determinism criterion.
std::string g_oracle_csv, g_zellner_csv, g_flat_csv;
constexpr std::size_t kParallelThreads = 4;

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string experiment_csv(const ExperimentResult& r) {
  std::ostringstream out;
  write_rows_csv(out, r.rows);
  write_summary_csv(out, r.summary);
  return out.str();
}

std::string oracle_csv(const OracleSuiteReport& r) {
  std::ostringstream out;
  write_oracle_csv(out, r);
  return out.str();
}

ArbKernel gaussian_rwmh(double h) {
  return ArbKernel(make_gaussian(1.0, 1), make_rw_gaussian(h, Matrix::identity(1)),
                   AcceptanceRule::metropolis_hastings());
}

Outcome gaussian_exactness() {
  Outcome o{true, ""};
  double worst_quad = 0.0, worst_sc = 0.0, worst_mc = 0.0;
  for (double h : {0.1, 1.0, 3.0}) {
    const ArbKernel k = gaussian_rwmh(h);
    const double exact = 1.0 / std::sqrt(1.0 + h);
    const double quad = quadrature_acceptance_1d(k, 0.0);
    const double sc = sc_accept_ub(h, 1.0, 1, 0.0).value;
    RandomStream s = RandomStream(1).substream(static_cast<std::uint64_t>(h * 10));
    const auto mc = mc_acceptance(k, Vector{0.0}, 100000, s);
    worst_quad = std::max(worst_quad, std::abs(quad - exact));
    worst_sc = std::max(worst_sc, std::abs(sc - quad));
    worst_mc = std::max(worst_mc, std::abs(mc.mean - exact));
    o.pass = o.pass && std::abs(quad - exact) <= 1e-8 && std::abs(sc - quad) <= 1e-12 &&
             std::abs(mc.mean - exact) <= 3.0 * mc.std_err && std::abs(mc.mean - exact) <= 0.01;
  }
  o.detail = "max|quad-exact|=" + fmt("%.2e", worst_quad) + " max|sc-quad|=" + fmt("%.2e", worst_sc) +
             " max|mc-exact|=" + fmt("%.2e", worst_mc);
  return o;
}

Outcome finite_tv_theorem() {
  ExperimentConfig c = ExperimentConfig::defaults(ExperimentId::OracleSuite);
  c.chains = 500;
  c.horizon = 30;
  c.seed = 1;
  c.threads = kParallelThreads;
  const OracleSuiteReport r = run_oracle_suite(c);
  g_oracle_csv = oracle_csv(r);
  double worst = std::numeric_limits<double>::infinity();
  std::size_t max_m = 0;
  for (const auto& row : r.rows) {
    worst = std::min(worst, row.tv_worst_margin);
    max_m = std::max(max_m, row.m);
  }
  return {r.rows.size() == 500 && r.tv_violations == 0 && max_m <= 12,
          "chains=" + std::to_string(r.rows.size()) + " violations=" + std::to_string(r.tv_violations) +
              " worst margin=" + fmt("%.3e", worst)};
}

Outcome conductance_ordering() {
  const RandomStream root(3);
  std::size_t ls = 0, single = 0;
  for (std::size_t k = 0; k < 200; ++k) {
    RandomStream s = root.substream(k);
    const FiniteChain chain = random_finite_chain(s, k);
    const double kp = conductance(chain).value;
    const double gap = 1.0 - spectral_gap(chain).beta;
    double bound = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < chain.size(); ++i)
      bound = std::min(bound, chain.off_diagonal_acceptance()[i] / (1.0 - chain.stationary()[i]));
    ls += gap > kp + 1e-10;
    single += kp > bound + 1e-10;
  }
  return {ls == 0 && single == 0,
          "200 chains, lawler-sokal violations=" + std::to_string(ls) + " singleton violations=" + std::to_string(single)};
}

Outcome wasserstein_desk_scale() {
  const ArbKernel k = gaussian_rwmh(3.0);
  const double c = wasserstein_constant(1.0, 1, 1.0 / std::sqrt(2.0 * std::numbers::pi));
  const std::size_t n = 100000, repeats = 20, horizon = 3;
  std::vector<std::vector<double>> w(horizon);
  for (std::size_t r = 0; r < repeats; ++r) {
    const RandomStream root = RandomStream(4).substream(r);
    RandomStream chains = root.substream(0), stationary = root.substream(1);
    std::vector<double> x(n, 0.0);
    for (std::size_t t = 0; t < horizon; ++t) {
      for (double& v : x) v = step(k, Vector{v}, chains).next[0];
      std::vector<double> a = x, b(n);
      for (double& v : b) v = stationary.normal();
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      w[t].push_back(empirical_w1_1d(a, b));
    }
  }
  Outcome o{true, ""};
  for (std::size_t t = 1; t <= horizon; ++t) {
    const auto& v = w[t - 1];
    double mean = 0.0, var = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    for (double x : v) var += (x - mean) * (x - mean);
    const double sd = std::sqrt(var / static_cast<double>(v.size() - 1));
    const double bound = wasserstein_lower_bound(0.5, t, 1, c);
    o.pass = o.pass && mean >= bound - 3.0 * sd;
    o.detail += "t=" + std::to_string(t) + ": W=" + fmt("%.4f", mean) + " sd=" + fmt("%.1e", sd) +
                " bound=" + fmt("%.4f", bound) + (t < horizon ? "; " : "");
  }
  o.pass = o.pass && std::abs(c - std::sqrt(2.0 * std::numbers::pi) / 8.0) < 1e-15;
  return o;
}

Outcome stuck_mass() {
  const ArbKernel k = gaussian_rwmh(3.0);
  const std::size_t chains = 10000, horizon = 10;
  std::vector<std::size_t> stuck(horizon, 0);
  RandomStream s(5);
  for (std::size_t c = 0; c < chains; ++c) {
    Vector x{0.0};
    for (std::size_t t = 0; t < horizon; ++t) {
      const auto r = step(k, x, s);
      if (r.accepted) break;
      ++stuck[t];
    }
  }
  Outcome o{true, ""};
  double worst_z = 0.0;
  for (std::size_t t = 1; t <= horizon; ++t) {
    const double p = std::pow(0.5, static_cast<double>(t));
    const double frac = static_cast<double>(stuck[t - 1]) / chains;
    const double sigma = std::sqrt(p * (1.0 - p) / chains);
    const double z = std::abs(frac - p) / sigma;
    worst_z = std::max(worst_z, z);
    o.pass = o.pass && z <= 3.0;
  }
  o.detail = "10^4 chains, t<=10, max |frac-0.5^t|/sigma=" + fmt("%.2f", worst_z);
  return o;
}

Outcome zellner_reproduction() {
  ExperimentConfig c = ExperimentConfig::defaults(ExperimentId::Zellner);
  c.seed = 1;
  c.threads = kParallelThreads;
  const ExperimentResult r = run_zellner(c);
  g_zellner_csv = experiment_csv(r);
  std::size_t above = 0, invalid = 0;
  for (const auto& row : r.rows) {
    if (!row.valid()) {
      ++invalid;
      continue;
    }
    above += row.accept_mean > row.closed_form_ub + 3.0 * row.accept_se;
  }
  std::map<std::string, double> at14;
  for (const auto& s : r.summary)
    if (s.d == 14) at14[s.h_rule] = s.mean_rate_lb;
  const double inv = at14["inv_dn(1)"], opt = at14["opt_scale(5.6644)"], cst = at14["const(0.6)"];
  const bool ordering = inv < opt && opt <= cst && opt >= 0.99 && cst >= 0.99;
  return {above == 0 && invalid == 0 && ordering && r.rows.size() == 7 * 10 * 3,
          "rows=" + std::to_string(r.rows.size()) + " above bound=" + std::to_string(above) +
              " invalid=" + std::to_string(invalid) + "; d=14 rate-lb: 1/(dn) " + fmt("%.4f", inv) +
              " < 2.38^2/d " + fmt("%.5f", opt) + " <= 0.6 " + fmt("%.5f", cst)};
}

Outcome flat_reproduction() {
  ExperimentConfig c = ExperimentConfig::defaults(ExperimentId::FlatLogistic);
  c.seed = 1;
  c.threads = kParallelThreads;
  const ExperimentResult r = run_flat_logistic(c);
  g_flat_csv = experiment_csv(r);
  std::map<std::string, std::map<std::size_t, SummaryRow>> by;
  for (const auto& s : r.summary) by[s.h_rule][s.n] = s;
  bool decreasing = true, ordering = true;
  std::string logs;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t n : {100u, 200u, 300u, 400u}) {
    const double la = by["const(0.1)"][n].mean_log_accept;
    decreasing = decreasing && la < prev;
    prev = la;
    logs += fmt("%.3f", la) + (n < 400 ? "," : "");
    const double five = by["inv_n(5)"][n].mean_rate_lb;
    ordering = ordering && five > by["inv_n(1)"][n].mean_rate_lb && five > by["inv_n(0.1)"][n].mean_rate_lb;
  }
  std::size_t flagged = 0;
  for (const auto& row : r.rows) flagged += row.flag != "ok";
  return {decreasing && ordering && r.rows.size() == 4 * 10 * 4,
          "mean log A (h=0.1) over n=100..400: " + logs + "; h=5/n rate-lb above 1/n and 0.1/n at every n: " +
              (ordering ? "yes" : "no") + "; regenerated rows=" + std::to_string(flagged)};
}

Outcome worked_examples() {
  ExperimentConfig c = ExperimentConfig::defaults(ExperimentId::Examples);
  c.seed = 1;
  const ExamplesReport r = run_examples(c);
  std::string detail;
  for (const auto& ch : r.checks)
    detail += ch.name + " " + fmt("%.5f", ch.value) + "<=" + fmt("%.5f", ch.bound) + "+" + fmt("%.1e", ch.slack) + "; ";
  return {r.all_passed() && r.checks.size() == 3, detail};
}

Outcome transport_solver() {
  const RandomStream root(9);
  auto simplex = [](RandomStream& s, std::size_t m) {
    Vector p(m);
    double total = 0.0;
    for (double& v : p) total += v = -std::log(s.uniform());
    for (double& v : p) v /= total;
    return p;
  };
  double worst = 0.0;
  std::size_t uncertified = 0, instances = 0;
  for (std::size_t k = 0; k < 100; ++k) {
    RandomStream s = root.substream(k);
    const std::size_t m = 1 + s.next_u64() % 4, n = 1 + s.next_u64() % 4;
    const Vector mu = simplex(s, m), nu = simplex(s, n);
    Matrix cost(m, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) cost(i, j) = s.uniform();
    const TransportPlan plan = exact_w1(mu, nu, cost);
    worst = std::max(worst, std::abs(plan.cost - testing_oracle::brute_force_transport(mu, nu, cost)));
    uncertified += !plan.certified;
    ++instances;
  }
  for (std::size_t k = 0; k < 64; ++k) {
    RandomStream s = root.substream(1000 + k);
    const std::size_t m = 1 + k, n = 1 + s.next_u64() % 64;
    const Vector mu = simplex(s, m), nu = simplex(s, n);
    Matrix cost(m, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) cost(i, j) = 5.0 * s.uniform();
    const TransportPlan plan = exact_w1(mu, nu, cost);
    uncertified += !(plan.certified && plan.min_reduced_cost >= -1e-9 && std::abs(plan.duality_gap) <= 1e-9);
    ++instances;
  }
  return {worst <= 1e-9 && uncertified == 0,
          "max |simplex - vertex enumeration| (100 instances, m<=4)=" + fmt("%.2e", worst) + "; uncertified " +
              std::to_string(uncertified) + "/" + std::to_string(instances)};
}

Outcome determinism() {
  ExperimentConfig oc = ExperimentConfig::defaults(ExperimentId::OracleSuite);
  oc.chains = 500;
  oc.horizon = 30;
  oc.seed = 1;
  oc.threads = 1;
  ExperimentConfig zc = ExperimentConfig::defaults(ExperimentId::Zellner);
  zc.seed = 1;
  zc.threads = 1;
  ExperimentConfig fc = ExperimentConfig::defaults(ExperimentId::FlatLogistic);
  fc.seed = 1;
  fc.threads = 1;
  const bool o = !g_oracle_csv.empty() && oracle_csv(run_oracle_suite(oc)) == g_oracle_csv;
  const bool z = !g_zellner_csv.empty() && experiment_csv(run_zellner(zc)) == g_zellner_csv;
  const bool f = !g_flat_csv.empty() && experiment_csv(run_flat_logistic(fc)) == g_flat_csv;
  // A second parallel run of the cheapest study.
  zc.threads = kParallelThreads;
  const bool z2 = experiment_csv(run_zellner(zc)) == g_zellner_csv;
  return {o && z && f && z2, std::string("serial vs ") + std::to_string(kParallelThreads) +
                                 " threads byte-identical: oracle " + (o ? "yes" : "no") + ", zellner " +
                                 (z && z2 ? "yes" : "no") + ", flat-logistic " + (f ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"gaussian exactness at the mode", gaussian_exactness},
      {"finite total-variation lower bound", finite_tv_theorem},
      {"conductance and spectral ordering", conductance_ordering},
      {"wasserstein lower bound at desk scale", wasserstein_desk_scale},
      {"stuck-mass mechanism", stuck_mass},
      {"zellner g-prior study", zellner_reproduction},
      {"flat-prior logistic study", flat_reproduction},
      {"worked-example inequalities", worked_examples},
      {"transport solver correctness", transport_solver},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("%s criterion %zu (%s) [%.1fs]: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
