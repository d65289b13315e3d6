#include "arblobo/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <sstream>
#include <string>

#include "arblobo/errors.hpp"
#include "arblobo/quadrature.hpp"

namespace arblobo {
namespace {

constexpr double kInputTol = 1e-10;

void check_probability_vector(std::span<const double> p, const char* who, bool strictly_positive) {
  if (p.empty()) throw InvalidArgument(std::string(who) + ": empty distribution");
  double total = 0.0;
  for (double v : p) {
    if (!std::isfinite(v) || v < 0.0 || (strictly_positive && v <= 0.0)) {
      throw InvalidArgument(std::string(who) + ": invalid probability entry");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > kInputTol) {
    throw InvalidArgument(std::string(who) + ": weights sum to " + std::to_string(total));
  }
}

Vector step_distribution(std::span<const double> dist, const Matrix& p) {
  Vector next(p.cols(), 0.0);
  for (std::size_t i = 0; i < p.rows(); ++i) {
    if (dist[i] == 0.0) continue;
    const auto row = p.row(i);
    for (std::size_t j = 0; j < p.cols(); ++j) next[j] += dist[i] * row[j];
  }
  return next;
}

double half_l1(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

}  // namespace

double FiniteChain::detailed_balance_residual() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      worst = std::max(worst, std::abs(pi_[i] * p_(i, j) - pi_[j] * p_(j, i)));
  return worst;
}

double FiniteChain::stationarity_residual() const {
  const Vector next = step_distribution(pi_, p_);
  double s = 0.0;
  for (std::size_t j = 0; j < size(); ++j) s += std::abs(next[j] - pi_[j]);
  return s;
}

FiniteChain build_finite_arb(Vector pi, Matrix q, const AcceptanceRule& rule, Matrix coordinates) {
  const std::size_t m = pi.size();
  check_probability_vector(pi, "build_finite_arb: π", true);
  if (q.rows() != m || q.cols() != m) throw DimensionMismatch("build_finite_arb: Q must be m×m");
  for (std::size_t i = 0; i < m; ++i) check_probability_vector(q.row(i), "build_finite_arb: Q row", false);
  if (rule.kind == RuleKind::NonReversibleCN) {
    throw InvalidArgument("build_finite_arb: the non-reversible CN rule has no finite-state form");
  }
  if (coordinates.rows() == 0) {
    coordinates = Matrix(m, 1);
    for (std::size_t i = 0; i < m; ++i) coordinates(i, 0) = static_cast<double>(i);
  }
  if (coordinates.rows() != m) throw DimensionMismatch("build_finite_arb: one coordinate row per state");

  FiniteChain c;
  c.rule_ = rule;
  c.a_ = Matrix(m, m);
  c.p_ = Matrix(m, m);
  c.a_off_ = Vector(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double moved = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double fwd = std::log(pi[i]) + std::log(q(i, j));
      const double rev = std::log(pi[j]) + std::log(q(j, i));
      c.a_(i, j) = accept_from_logs(rule, fwd, rev);
      if (j != i) {
        c.p_(i, j) = c.a_(i, j) * q(i, j);
        moved += c.p_(i, j);
      }
    }
    c.a_off_[i] = moved;
    c.p_(i, i) = std::max(0.0, 1.0 - moved);
  }
  c.pi_ = std::move(pi);
  c.q_ = std::move(q);
  c.coords_ = std::move(coordinates);

  const double db = c.detailed_balance_residual();
  if (db > 1e-12) {
    throw VerificationFailure("build_finite_arb: detailed balance residual " + std::to_string(db));
  }
  return c;
}

std::vector<double> exact_tv_curve(const FiniteChain& chain, std::span<const double> initial,
                                   std::size_t horizon) {
  if (initial.size() != chain.size()) throw DimensionMismatch("exact_tv_curve: initial distribution size");
  if (horizon < 1) throw InvalidArgument("exact_tv_curve: horizon must be >= 1");
  std::vector<double> out;
  out.reserve(horizon);
  Vector dist(initial.begin(), initial.end());
  for (std::size_t t = 1; t <= horizon; ++t) {
    dist = step_distribution(dist, chain.transition());
    out.push_back(half_l1(dist, chain.stationary()));
  }
  return out;
}

std::vector<double> exact_tv_curve(const FiniteChain& chain, std::size_t start, std::size_t horizon) {
  if (start >= chain.size()) throw InvalidArgument("exact_tv_curve: start state out of range");
  Vector point(chain.size(), 0.0);
  point[start] = 1.0;
  return exact_tv_curve(chain, point, horizon);
}

TvTheoremReport finite_tv_theorem_check(const FiniteChain& chain, std::size_t horizon) {
  TvTheoremReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const auto tv = exact_tv_curve(chain, i, horizon);
    const double stay = 1.0 - chain.off_diagonal_acceptance()[i];
    for (std::size_t t = 1; t <= horizon; ++t) {
      const double bound = std::pow(std::max(stay, 0.0), static_cast<double>(t)) - chain.stationary()[i];
      const double margin = tv[t - 1] - bound;
      ++report.checks;
      if (margin < report.worst_margin) {
        report.worst_margin = margin;
        report.worst_state = i;
        report.worst_t = t;
      }
    }
  }
  if (report.worst_margin < -1e-10) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "finite_tv_theorem_check: TV below (1 - A_off)^t - pi at state " << report.worst_state
        << ", t = " << report.worst_t << " (margin " << report.worst_margin << ")";
    throw VerificationFailure(msg.str());
  }
  return report;
}

SpectralGap spectral_gap(const FiniteChain& chain) {
  const double db = chain.detailed_balance_residual();
  if (db > 1e-10) throw NotReversible("spectral_gap: detailed balance residual " + std::to_string(db));
  const std::size_t m = chain.size();
  const auto& pi = chain.stationary();
  const auto& p = chain.transition();
  Matrix s(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) s(i, j) = std::sqrt(pi[i]) * p(i, j) / std::sqrt(pi[j]);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < i; ++j) s(i, j) = s(j, i) = 0.5 * (s(i, j) + s(j, i));

  SpectralGap out;
  out.eigenvalues = sym_eigen(s).values;
  out.beta = 0.0;
  for (std::size_t k = 1; k < m; ++k) out.beta = std::max(out.beta, std::abs(out.eigenvalues[k]));
  out.beta = std::min(out.beta, 1.0);
  out.gap = 1.0 - out.beta;
  return out;
}

Conductance conductance(const FiniteChain& chain) {
  const std::size_t m = chain.size();
  if (m > 20) throw TooManyStates("conductance: exhaustive search limited to 20 states");
  if (m < 2) throw InvalidArgument("conductance: need at least two states");
  const auto& pi = chain.stationary();
  Matrix flow(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) flow(i, j) = pi[i] * chain.transition()(i, j);

  // The last state always sits in the complement; k_P(B) = k_P(Bᶜ) because
  // stationarity balances the flows across any cut.
  Conductance best;
  best.value = std::numeric_limits<double>::infinity();
  const std::uint32_t limit = 1u << (m - 1);
  std::vector<char> in(m);
  for (std::uint32_t mask = 1; mask < limit; ++mask) {
    double mass = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      in[i] = (i + 1 < m) && ((mask >> i) & 1u);
      if (in[i]) mass += pi[i];
    }
    double out_flow = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (!in[i]) continue;
      for (std::size_t j = 0; j < m; ++j)
        if (!in[j]) out_flow += flow(i, j);
    }
    const double k = out_flow / (mass * (1.0 - mass));
    if (k < best.value) {
      best.value = k;
      best.subset.clear();
      for (std::size_t i = 0; i < m; ++i)
        if (in[i]) best.subset.push_back(i);
    }
  }
  return best;
}

namespace {

struct Cell {
  std::size_t i, j;
};

// m + n − 1 cells forming a spanning tree of the bipartite row/column graph.
using Basis = std::vector<Cell>;

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

class TransportationSimplex {
 public:
  TransportationSimplex(std::span<const double> supply, std::span<const double> demand, const Matrix& cost)
      : m_(supply.size()), n_(demand.size()), supply_(supply.begin(), supply.end()),
        demand_(demand.begin(), demand.end()), cost_(cost), flow_(m_, n_), basic_(m_ * n_, 0),
        adj_(m_ + n_), parent_edge_(m_ + n_), order_(m_ + n_) {}

  const Basis& basis() const { return basis_; }

  TransportPlan solve(const Basis& warm_start) {
    if (warm_start.empty() || !load_basis(warm_start)) {
      northwest_corner();
    }
    const double scale = std::max(1.0, max_abs_cost());
    const double tol = 1e-12 * scale;
    const std::size_t bland_after = 50 * (m_ + n_);
    const std::size_t max_pivots = 5000 * (m_ + n_);

    std::size_t pivots = 0;
    for (;; ++pivots) {
      if (pivots > max_pivots) throw MaxIterExceeded("exact_w1: transportation simplex did not terminate");
      compute_duals();
      const bool bland = pivots > bland_after;
      std::optional<Cell> entering;
      double best = -tol;
      for (std::size_t i = 0; i < m_ && !(bland && entering); ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
          if (basic_[i * n_ + j]) continue;
          const double r = cost_(i, j) - u_[i] - v_[j];
          if (r < best) {
            best = r;
            entering = Cell{i, j};
            if (bland) break;
          }
        }
      }
      if (!entering) break;
      pivot(*entering);
    }

    TransportPlan plan;
    plan.pivots = pivots;
    plan.plan = flow_;
    plan.row_duals = u_;
    plan.col_duals = v_;
    double primal = 0.0, dual = 0.0;
    plan.min_reduced_cost = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        primal += flow_(i, j) * cost_(i, j);
        plan.min_reduced_cost = std::min(plan.min_reduced_cost, cost_(i, j) - u_[i] - v_[j]);
      }
    for (std::size_t i = 0; i < m_; ++i) dual += u_[i] * supply_[i];
    for (std::size_t j = 0; j < n_; ++j) dual += v_[j] * demand_[j];
    plan.cost = primal;
    plan.duality_gap = primal - dual;
    plan.certified = std::abs(plan.duality_gap) <= 1e-9 * scale && plan.min_reduced_cost >= -1e-9 * scale;
    return plan;
  }

 private:
  double max_abs_cost() const {
    double c = 0.0;
    for (double v : cost_.data()) c = std::max(c, std::abs(v));
    return c;
  }

  void set_basis(Basis basis) {
    std::fill(basic_.begin(), basic_.end(), 0);
    for (const Cell& c : basis) basic_[c.i * n_ + c.j] = 1;
    basis_ = std::move(basis);
    build_adjacency();
  }

  void northwest_corner() {
    flow_ = Matrix(m_, n_);
    Basis basis;
    basis.reserve(m_ + n_ - 1);
    Vector s = supply_, r = demand_;
    std::size_t i = 0, j = 0;
    for (;;) {
      const double x = std::max(0.0, std::min(s[i], r[j]));
      flow_(i, j) = x;
      basis.push_back({i, j});
      const bool row_done = s[i] <= r[j];
      s[i] = std::max(0.0, s[i] - x);
      r[j] = std::max(0.0, r[j] - x);
      if (i == m_ - 1 && j == n_ - 1) break;
      if (j == n_ - 1 || (i < m_ - 1 && row_done)) {
        ++i;
      } else {
        ++j;
      }
    }
    set_basis(std::move(basis));
  }

  // Flows of the basic solution for the current marginals by peeling leaves
  // off the tree. Returns false (leaving state unspecified) if the cells do
  // not form a spanning tree or the basic solution is infeasible.
  bool load_basis(const Basis& basis) {
    if (basis.size() != m_ + n_ - 1) return false;
    for (const Cell& c : basis)
      if (c.i >= m_ || c.j >= n_) return false;
    set_basis(basis);
    std::vector<std::size_t> degree(m_ + n_);
    for (std::size_t node = 0; node < m_ + n_; ++node) degree[node] = adj_[node].size();
    Vector residual(m_ + n_);
    std::copy(supply_.begin(), supply_.end(), residual.begin());
    std::copy(demand_.begin(), demand_.end(), residual.begin() + static_cast<std::ptrdiff_t>(m_));
    std::vector<char> edge_done(basis_.size(), 0);
    std::vector<std::size_t> leaves;
    for (std::size_t node = 0; node < m_ + n_; ++node)
      if (degree[node] == 1) leaves.push_back(node);
    flow_ = Matrix(m_, n_);
    std::size_t assigned = 0;
    while (!leaves.empty()) {
      const std::size_t leaf = leaves.back();
      leaves.pop_back();
      if (degree[leaf] != 1) continue;
      std::size_t edge = kNone;
      for (std::size_t e : adj_[leaf])
        if (!edge_done[e]) edge = e;
      const Cell c = basis_[edge];
      const std::size_t other = leaf < m_ ? m_ + c.j : c.i;
      const double x = residual[leaf];
      if (x < -1e-14) return false;
      flow_(c.i, c.j) = std::max(0.0, x);
      residual[other] -= x;
      residual[leaf] = 0.0;
      edge_done[edge] = 1;
      ++assigned;
      degree[leaf] = 0;
      if (--degree[other] == 1) leaves.push_back(other);
    }
    return assigned == basis_.size();
  }

  void build_adjacency() {
    for (auto& list : adj_) list.clear();
    for (std::size_t e = 0; e < basis_.size(); ++e) {
      adj_[basis_[e].i].push_back(e);
      adj_[m_ + basis_[e].j].push_back(e);
    }
  }

  std::size_t other_end(std::size_t edge, std::size_t node) const {
    const Cell& c = basis_[edge];
    return node < m_ ? m_ + c.j : c.i;
  }

  // Breadth-first tree walk from `root`, filling parent_edge_ and order_.
  void walk_tree(std::size_t root) {
    std::fill(parent_edge_.begin(), parent_edge_.end(), kNone);
    std::vector<char> seen(m_ + n_, 0);
    seen[root] = 1;
    order_.clear();
    order_.push_back(root);
    for (std::size_t head = 0; head < order_.size(); ++head) {
      const std::size_t node = order_[head];
      for (std::size_t e : adj_[node]) {
        const std::size_t next = other_end(e, node);
        if (seen[next]) continue;
        seen[next] = 1;
        parent_edge_[next] = e;
        order_.push_back(next);
      }
    }
  }

  void compute_duals() {
    walk_tree(0);
    if (order_.size() != m_ + n_) throw Error("exact_w1: basis is not a spanning tree");
    u_.assign(m_, 0.0);
    v_.assign(n_, 0.0);
    for (std::size_t k = 1; k < order_.size(); ++k) {
      const std::size_t node = order_[k];
      const Cell& c = basis_[parent_edge_[node]];
      if (node < m_) {
        u_[node] = cost_(c.i, c.j) - v_[c.j];
      } else {
        v_[node - m_] = cost_(c.i, c.j) - u_[c.i];
      }
    }
  }

  void pivot(Cell entering) {
    // Tree path from the entering column to the entering row; its cells
    // alternate −, +, −, ... starting next to the column.
    walk_tree(m_ + entering.j);
    std::vector<std::size_t> path;
    for (std::size_t node = entering.i; node != m_ + entering.j;) {
      const std::size_t e = parent_edge_[node];
      path.push_back(e);
      node = other_end(e, node);
    }
    std::reverse(path.begin(), path.end());

    double theta = std::numeric_limits<double>::infinity();
    std::size_t leave = 0;
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const Cell& c = basis_[path[k]];
      if (flow_(c.i, c.j) < theta) {
        theta = flow_(c.i, c.j);
        leave = k;
      }
    }
    for (std::size_t k = 0; k < path.size(); ++k) {
      const Cell& c = basis_[path[k]];
      double& x = flow_(c.i, c.j);
      x = (k % 2 == 0) ? std::max(0.0, x - theta) : x + theta;
    }
    const std::size_t leaving_edge = path[leave];
    const Cell out = basis_[leaving_edge];
    flow_(out.i, out.j) = 0.0;
    basic_[out.i * n_ + out.j] = 0;
    flow_(entering.i, entering.j) = theta;
    basic_[entering.i * n_ + entering.j] = 1;
    basis_[leaving_edge] = entering;
    build_adjacency();
  }

  std::size_t m_, n_;
  Vector supply_, demand_;
  const Matrix& cost_;
  Matrix flow_;
  std::vector<char> basic_;
  Basis basis_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> parent_edge_;
  std::vector<std::size_t> order_;
  Vector u_, v_;
};

TransportPlan solve_transport(std::span<const double> mu, std::span<const double> nu, const Matrix& cost,
                              Basis& basis) {
  if (mu.size() > 64 || nu.size() > 64) throw TooManyStates("exact_w1: supports limited to 64 points");
  if (cost.rows() != mu.size() || cost.cols() != nu.size()) throw DimensionMismatch("exact_w1: cost shape");
  auto check = [](std::span<const double> p, const char* who) {
    if (p.empty()) throw InvalidArgument(std::string(who) + ": empty marginal");
    double total = 0.0;
    for (double v : p) {
      if (!std::isfinite(v) || v < 0.0) throw InfeasibleMarginals(std::string(who) + ": negative mass");
      total += v;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw InfeasibleMarginals(std::string(who) + ": marginal sums to " + std::to_string(total));
    }
    return total;
  };
  const double mu_total = check(mu, "exact_w1 (mu)");
  const double nu_total = check(nu, "exact_w1 (nu)");
  for (double c : cost.data())
    if (!std::isfinite(c) || c < 0.0) throw InvalidArgument("exact_w1: costs must be finite and nonnegative");

  Vector demand(nu.begin(), nu.end());
  for (double& v : demand) v *= mu_total / nu_total;
  TransportationSimplex simplex(mu, demand, cost);
  TransportPlan plan = simplex.solve(basis);
  basis = simplex.basis();
  return plan;
}

}  // namespace

TransportPlan exact_w1(std::span<const double> mu, std::span<const double> nu, const Matrix& cost) {
  Basis cold;
  return solve_transport(mu, nu, cost, cold);
}


Matrix truncated_distance_matrix(const Matrix& coordinates) {
  const std::size_t m = coordinates.rows();
  Matrix d(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < coordinates.cols(); ++k) {
        const double diff = coordinates(i, k) - coordinates(j, k);
        s += diff * diff;
      }
      d(i, j) = std::min(std::sqrt(s), 1.0);
    }
  return d;
}

namespace {

constexpr double kDecayFloor = 1e-11;
constexpr std::size_t kMaxEquivHorizon = 1000;

double fitted_decay_rate(const std::vector<double>& w) {
  std::vector<std::size_t> valid;
  for (std::size_t t = 0; t < w.size(); ++t)
    if (w[t] > kDecayFloor) valid.push_back(t);
  if (valid.size() < 2) return 0.0;
  const std::size_t first = valid.size() / 2;
  const std::size_t count = valid.size() - first;
  if (count < 2) return 0.0;
  double sx = 0.0, sy = 0.0;
  for (std::size_t k = first; k < valid.size(); ++k) {
    sx += static_cast<double>(valid[k] + 1);
    sy += std::log(w[valid[k]]);
  }
  const double mx = sx / count, my = sy / count;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = first; k < valid.size(); ++k) {
    const double dx = static_cast<double>(valid[k] + 1) - mx;
    sxy += dx * (std::log(w[valid[k]]) - my);
    sxx += dx * dx;
  }
  return std::exp(sxy / sxx);
}

}  // namespace

EquivalenceReport finite_equiv_illustration(const FiniteChain& chain, std::size_t horizon) {
  if (horizon < 2) throw InvalidArgument("finite_equiv_illustration: horizon must be >= 2");
  const SpectralGap sg = spectral_gap(chain);
  const Matrix cost = truncated_distance_matrix(chain.coordinates());
  const std::size_t m = chain.size();

  // The tail is geometric only once the subdominant modes have died out, so
  // curves run until W reaches the floor rather than for a fixed horizon.
  const std::size_t steps = std::max(horizon, kMaxEquivHorizon);

  EquivalenceReport report;
  report.beta = sg.beta;
  for (std::size_t i = 0; i < m; ++i) {
    Vector dist(m, 0.0);
    dist[i] = 1.0;
    std::vector<double> w;
    w.reserve(steps);
    Basis basis;
    for (std::size_t t = 1; t <= steps; ++t) {
      dist = step_distribution(dist, chain.transition());
      w.push_back(solve_transport(dist, chain.stationary(), cost, basis).cost);
      const double scaled = sg.beta > 0.0 ? w.back() / std::pow(sg.beta, static_cast<double>(t))
                                          : (w.back() > kDecayFloor ? std::numeric_limits<double>::infinity() : 0.0);
      report.constant = std::max(report.constant, scaled);
      if (t >= horizon && w.back() <= kDecayFloor) break;
    }
    report.fitted_rate = std::max(report.fitted_rate, fitted_decay_rate(w));
    report.distances.push_back(std::move(w));
  }
  report.passed = report.fitted_rate <= report.beta + 0.02;
  return report;
}

DiscretizedChain discretize_kernel_1d(const TargetDensity& target, const ProposalFamily& proposal,
                                      const AcceptanceRule& rule, double a, double b, std::size_t m) {
  if (target.dim() != 1 || proposal.dim() != 1) throw InvalidArgument("discretize_kernel_1d: 1-D only");
  if (!(a < b)) throw InvalidArgument("discretize_kernel_1d: require a < b");
  if (m < 2 || m > 400) throw InvalidArgument("discretize_kernel_1d: m must lie in [2, 400]");

  DiscretizedChain out;
  out.width = (b - a) / static_cast<double>(m);
  out.grid.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.grid[i] = a + (static_cast<double>(i) + 0.5) * out.width;

  double log_peak = -std::numeric_limits<double>::infinity();
  for (double x : out.grid) log_peak = std::max(log_peak, target.log_density(std::span(&x, 1)));
  if (!std::isfinite(log_peak)) throw InsufficientCoverage("discretize_kernel_1d: target vanishes on grid");

  auto density = [&](double x) {
    const double lp = target.log_density(std::span(&x, 1));
    return lp == -std::numeric_limits<double>::infinity() ? 0.0 : std::exp(lp - log_peak);
  };
  const double span_len = b - a;
  const double inner = quadrature_1d(density, a, b, 64);
  const double outer = quadrature_1d(density, a - 4.0 * span_len, a, 64) +
                       quadrature_1d(density, b, b + 4.0 * span_len, 64);
  out.coverage = inner / (inner + outer);
  if (out.coverage < 1.0 - 1e-8) {
    throw InsufficientCoverage("discretize_kernel_1d: grid holds only " + std::to_string(out.coverage) +
                               " of the target mass");
  }

  Vector pi(m);
  for (std::size_t i = 0; i < m; ++i) pi[i] = density(out.grid[i]);
  const double pi_total = std::accumulate(pi.begin(), pi.end(), 0.0);
  for (double& v : pi) v /= pi_total;

  Matrix q(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      q(i, j) = std::exp(proposal.log_q(std::span(&out.grid[i], 1), std::span(&out.grid[j], 1))) * out.width;
      row += q(i, j);
    }
    if (!(row > 0.0)) throw InsufficientCoverage("discretize_kernel_1d: proposal leaves the grid");
    for (std::size_t j = 0; j < m; ++j) q(i, j) /= row;
  }

  Matrix coords(m, 1, Vector(out.grid));
  out.chain = build_finite_arb(std::move(pi), std::move(q), rule, std::move(coords));
  out.stationarity_residual = out.chain.stationarity_residual();
  return out;
}

}  // namespace arblobo
