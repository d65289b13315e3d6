#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace arblobo {

enum class BoundKind { TotalVariation, Wasserstein };

/// Lower-bound curve values[t−1] for t = 1..horizon.
struct BoundCurve {
  BoundKind kind = BoundKind::TotalVariation;
  double acceptance = 0.0;
  std::size_t horizon = 0;
  std::vector<double> values;
  /// C_{d,π}; Wasserstein curves only.
  double constant = 1.0;
  std::size_t dim = 1;
};

/// An acceptance upper bound clamped to [0, 1]; `log_raw` keeps the unclamped
/// value (which may exceed 0 when the bound is vacuous).
struct AcceptanceBound {
  double value = 1.0;
  double log_raw = 0.0;

  bool vacuous() const { return log_raw >= 0.0; }
};

AcceptanceBound clamp_log_bound(double log_raw);

/// [1 − A]^t.
double tv_lower_bound(double acceptance, std::size_t t);
BoundCurve tv_lower_curve(double acceptance, std::size_t horizon);

/// 1 − A_inf.
double geo_rate_lb_tv(double acceptance_inf);

enum class NormTag { L1, L2, LInf };
NormTag parse_norm_tag(std::string_view tag);

/// Largest C₀ with ‖x‖ ≥ C₀‖x‖₁ on ℝ^d.
double norm_equivalence_constant(NormTag norm, std::size_t d);

/// C_{d,π} = C₀ d [2 s^{1/d} (1+d)^{1+1/d}]^{−1}.
double wasserstein_constant(double c0, std::size_t d, double sup_density);
/// Same constant from log s, for densities whose supremum under/overflows.
double wasserstein_constant_from_log_sup(double c0, std::size_t d, double log_sup_density);

/// C_{d,π} [1 − A]^{t(1+1/d)}.
double wasserstein_lower_bound(double acceptance, std::size_t t, std::size_t d, double constant);
BoundCurve wasserstein_lower_curve(double acceptance, std::size_t horizon, std::size_t d,
                                   double constant);

/// (1 − A_inf)^{(d+1)/d}.
double geo_rate_lb_wass(double acceptance_inf, std::size_t d);

/// RWMH acceptance at θ₀ for a ξ⁻¹-strongly convex −log π:
/// (1+h/ξ)^{−d/2} exp{(h/2)‖v‖²/(1+h/ξ)} with v a subgradient at θ₀.
AcceptanceBound sc_accept_ub(double h, double xi, std::size_t d, double v_norm = 0.0);

/// MH acceptance at a point from a bounded proposal density: B / π(θ₀).
AcceptanceBound accept_ub_bounded_proposal(double log_pi_at_point, double log_b);

/// (hn(1−√γ)²/(2g) + 1)^{−d/2}.
AcceptanceBound zellner_accept_ub(double h, std::size_t n, double gamma, double g, std::size_t d);

/// (1 + h λ_min(XᵀX)/g)^{−d/2}: the strong-convexity bound with ξ = g/λ_min(XᵀX).
AcceptanceBound zellner_empirical_accept_ub(double h, double lambda_min_gram, double g, std::size_t d);

/// Constants of the Laplace-type concentration bound. Only λ₀ and c enter the
/// conclusion; the radius, optimality gap, tail-integral and growth constants
/// of its hypotheses are not represented.
struct LaplaceParams {
  double lambda0 = 1.0;
  double c = 1.0;
  std::size_t n = 1;
  std::size_t d = 1;
};

/// log of (1/(1+c)) (n/(2πλ₀))^{d/2}, a lower bound on log π_n(θ*).
double laplace_density_lb(const LaplaceParams& params);

/// B (1+c) (2πλ₀/n)^{d/2}.
AcceptanceBound laplace_accept_ub(const LaplaceParams& params, double log_b);

/// (λ₀/(nh))^{d/2} (1+c)/det(C)^{1/2} for a N(μ(θ), hC) proposal.
AcceptanceBound concentration_gaussian_accept_ub(const LaplaceParams& params, double h,
                                                 double log_det_c = 0.0);

/// 1/(bh[e^{−(x²+b²y²)} + e^{−(b²x²+y²)}]).
AcceptanceBound mixture_accept_ub(double b, double h, double x, double y);

/// Σ λ_k Â_k.
double rs_combined_acceptance(std::span<const double> probabilities, std::span<const double> acceptances);

}  // namespace arblobo
