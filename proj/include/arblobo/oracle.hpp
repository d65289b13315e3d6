#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "arblobo/kernels.hpp"
#include "arblobo/linalg.hpp"
#include "arblobo/proposals.hpp"
#include "arblobo/targets.hpp"

namespace arblobo {

/// Accept-reject chain on a finite state space, with every piece explicit.
///
/// P_ij = a_ij Q_ij for i ≠ j and P_ii = 1 − A_off(i), where
/// A_off(i) = Σ_{j≠i} a_ij Q_ij is the probability of actually moving.
class FiniteChain {
 public:
  std::size_t size() const { return pi_.size(); }
  const Vector& stationary() const { return pi_; }
  const Matrix& transition() const { return p_; }
  const Matrix& proposal() const { return q_; }
  const Matrix& acceptance() const { return a_; }
  const Vector& off_diagonal_acceptance() const { return a_off_; }
  /// One row of coordinates per state (used for metrics).
  const Matrix& coordinates() const { return coords_; }
  const AcceptanceRule& rule() const { return rule_; }

  /// max |π_i P_ij − π_j P_ji|.
  double detailed_balance_residual() const;
  /// ‖πᵀP − πᵀ‖₁.
  double stationarity_residual() const;

 private:
  friend FiniteChain build_finite_arb(Vector pi, Matrix q, const AcceptanceRule& rule, Matrix coordinates);

  Vector pi_;
  Matrix p_, q_, a_;
  Vector a_off_;
  Matrix coords_;
  AcceptanceRule rule_;
};

/// Builds the chain from stationary weights, a stochastic proposal matrix
/// and an MH, Barker or portkey rule. Coordinates default to state indices.
/// Throws InvalidArgument on invalid inputs and VerificationFailure if the
/// constructed chain violates detailed balance by more than 1e-12.
FiniteChain build_finite_arb(Vector pi, Matrix q, const AcceptanceRule& rule, Matrix coordinates = {});

/// ½‖P^t(start,·) − π‖₁ for t = 1..horizon.
std::vector<double> exact_tv_curve(const FiniteChain& chain, std::size_t start, std::size_t horizon);
/// Same from an arbitrary initial distribution.
std::vector<double> exact_tv_curve(const FiniteChain& chain, std::span<const double> initial,
                                   std::size_t horizon);

struct TvTheoremReport {
  /// min over states and t of TV(t) − [(1 − A_off(i))^t − π_i].
  double worst_margin = 0.0;
  std::size_t worst_state = 0;
  std::size_t worst_t = 0;
  std::size_t checks = 0;
};

/// Checks TV(P^t(i,·), π) ≥ (1 − A_off(i))^t − π_i − 1e-10 for every state
/// and t ≤ horizon. The −π_i term is the mass the stationary law itself puts
/// on the atom {i}. Throws VerificationFailure with the counterexample.
TvTheoremReport finite_tv_theorem_check(const FiniteChain& chain, std::size_t horizon);

struct SpectralGap {
  double gap = 0.0;
  double beta = 0.0;
  Vector eigenvalues;  // descending
};

/// Throws NotReversible if detailed balance fails by more than 1e-10.
SpectralGap spectral_gap(const FiniteChain& chain);

struct Conductance {
  double value = 0.0;
  std::vector<std::size_t> subset;
};

/// Exact conductance by exhaustive search; throws TooManyStates for m > 20.
Conductance conductance(const FiniteChain& chain);

struct TransportPlan {
  Matrix plan;
  double cost = 0.0;
  Vector row_duals;
  Vector col_duals;
  /// Primal cost minus dual objective.
  double duality_gap = 0.0;
  /// min over cells of c_ij − u_i − v_j (≥ 0 at optimality).
  double min_reduced_cost = 0.0;
  std::size_t pivots = 0;
  bool certified = false;
};

/// Exact optimal transport between probability vectors by the
/// transportation simplex (MODI duals, stepping-stone pivots). Sizes ≤ 64.
TransportPlan exact_w1(std::span<const double> mu, std::span<const double> nu, const Matrix& cost);

/// Pairwise min(‖x_i − x_j‖₂, 1) over the chain's coordinates.
Matrix truncated_distance_matrix(const Matrix& coordinates);

struct EquivalenceReport {
  double beta = 0.0;
  /// Largest fitted per-step decay rate of W_{d∧1}(P^t(i,·), π) over states.
  double fitted_rate = 0.0;
  /// max over i, t of W_t(i) / β^t (infinite when β = 0 and W does not vanish).
  double constant = 0.0;
  /// w[i][t−1] = W_{d∧1}(P^t(i,·), π); curves may have different lengths.
  std::vector<std::vector<double>> distances;
  bool passed = false;
};

/// Numerical illustration that W_{d∧1} decays no slower than the spectral
/// radius β: fits a log-linear slope to the tail of each curve and checks
/// fitted_rate ≤ β + 0.02. Each curve runs for at least `horizon` steps and
/// then until W drops below 1e-11, for at most max(horizon, 1000) steps.
EquivalenceReport finite_equiv_illustration(const FiniteChain& chain, std::size_t horizon);

struct DiscretizedChain {
  FiniteChain chain;
  Vector grid;
  double width = 0.0;
  /// Fraction of target mass on [a, b] (relative to a wide reference interval).
  double coverage = 0.0;
  double stationarity_residual = 0.0;
};

/// Midpoint discretization of a 1-D accept-reject kernel on m cells of [a, b].
/// Throws InsufficientCoverage if the grid misses more than 1e-8 of the mass.
DiscretizedChain discretize_kernel_1d(const TargetDensity& target, const ProposalFamily& proposal,
                                      const AcceptanceRule& rule, double a, double b, std::size_t m);

}  // namespace arblobo
