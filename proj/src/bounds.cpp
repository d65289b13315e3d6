#include "arblobo/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "arblobo/errors.hpp"

namespace arblobo {
namespace {

void check_acceptance(double a, const char* who) {
  if (!(a >= 0.0 && a <= 1.0)) {
    throw InvalidArgument(std::string(who) + ": acceptance must lie in [0, 1]");
  }
}

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(what) + " must be positive");
}

/// (1 − A)^p for p > 0, through log1p.
double survival_power(double a, double p) {
  if (a == 1.0) return 0.0;
  // pow is correctly rounded on exact bases (so 0.5^3 prints as 0.125);
  // otherwise log1p keeps the digits of a small a.
  const double base = 1.0 - a;
  if (1.0 - base == a) return std::pow(base, p);
  return std::exp(p * std::log1p(-a));
}

}  // namespace

AcceptanceBound clamp_log_bound(double log_raw) {
  if (std::isnan(log_raw)) throw NonFinite("acceptance bound is NaN");
  return {log_raw >= 0.0 ? 1.0 : std::exp(log_raw), log_raw};
}

double tv_lower_bound(double acceptance, std::size_t t) {
  check_acceptance(acceptance, "tv_lower_bound");
  if (t < 1) throw InvalidArgument("tv_lower_bound: t must be >= 1");
  return survival_power(acceptance, static_cast<double>(t));
}

BoundCurve tv_lower_curve(double acceptance, std::size_t horizon) {
  if (horizon < 1) throw InvalidArgument("tv_lower_curve: horizon must be >= 1");
  BoundCurve c{BoundKind::TotalVariation, acceptance, horizon, {}, 1.0, 1};
  c.values.reserve(horizon);
  for (std::size_t t = 1; t <= horizon; ++t) c.values.push_back(tv_lower_bound(acceptance, t));
  return c;
}

double geo_rate_lb_tv(double acceptance_inf) {
  check_acceptance(acceptance_inf, "geo_rate_lb_tv");
  return 1.0 - acceptance_inf;
}

NormTag parse_norm_tag(std::string_view tag) {
  if (tag == "l1") return NormTag::L1;
  if (tag == "l2") return NormTag::L2;
  if (tag == "linf") return NormTag::LInf;
  throw InvalidArgument("unknown norm tag '" + std::string(tag) + "' (expected l1, l2 or linf)");
}

double norm_equivalence_constant(NormTag norm, std::size_t d) {
  if (d < 1) throw InvalidArgument("norm_equivalence_constant: d must be >= 1");
  const double dd = static_cast<double>(d);
  switch (norm) {
    case NormTag::L1: return 1.0;
    case NormTag::L2: return 1.0 / std::sqrt(dd);
    case NormTag::LInf: return 1.0 / dd;
  }
  return 1.0;
}

double wasserstein_constant_from_log_sup(double c0, std::size_t d, double log_sup_density) {
  check_positive(c0, "wasserstein_constant: C0");
  if (d < 1) throw InvalidArgument("wasserstein_constant: d must be >= 1");
  if (!std::isfinite(log_sup_density)) throw NonFinite("wasserstein_constant: log s is not finite");
  const double dd = static_cast<double>(d);
  const double log_c = std::log(c0) + std::log(dd) - std::log(2.0) - log_sup_density / dd -
                       (1.0 + 1.0 / dd) * std::log1p(dd);
  return std::exp(log_c);
}

double wasserstein_constant(double c0, std::size_t d, double sup_density) {
  check_positive(sup_density, "wasserstein_constant: s");
  if (d >= 1 && c0 > 0.0) {
    const double dd = static_cast<double>(d);
    const double direct = c0 * dd / (2.0 * std::pow(sup_density, 1.0 / dd) * std::pow(1.0 + dd, 1.0 + 1.0 / dd));
    if (std::isnormal(direct)) return direct;
  }
  return wasserstein_constant_from_log_sup(c0, d, std::log(sup_density));
}

double wasserstein_lower_bound(double acceptance, std::size_t t, std::size_t d, double constant) {
  check_acceptance(acceptance, "wasserstein_lower_bound");
  if (t < 1 || d < 1) throw InvalidArgument("wasserstein_lower_bound: t and d must be >= 1");
  check_positive(constant, "wasserstein_lower_bound: constant");
  const double exponent = static_cast<double>(t) * (1.0 + 1.0 / static_cast<double>(d));
  return constant * survival_power(acceptance, exponent);
}

BoundCurve wasserstein_lower_curve(double acceptance, std::size_t horizon, std::size_t d,
                                   double constant) {
  if (horizon < 1) throw InvalidArgument("wasserstein_lower_curve: horizon must be >= 1");
  BoundCurve c{BoundKind::Wasserstein, acceptance, horizon, {}, constant, d};
  c.values.reserve(horizon);
  for (std::size_t t = 1; t <= horizon; ++t)
    c.values.push_back(wasserstein_lower_bound(acceptance, t, d, constant));
  return c;
}

double geo_rate_lb_wass(double acceptance_inf, std::size_t d) {
  check_acceptance(acceptance_inf, "geo_rate_lb_wass");
  if (d < 1) throw InvalidArgument("geo_rate_lb_wass: d must be >= 1");
  const double dd = static_cast<double>(d);
  return survival_power(acceptance_inf, (dd + 1.0) / dd);
}

AcceptanceBound sc_accept_ub(double h, double xi, std::size_t d, double v_norm) {
  check_positive(h, "sc_accept_ub: h");
  check_positive(xi, "sc_accept_ub: ξ");
  if (!(v_norm >= 0.0)) throw InvalidArgument("sc_accept_ub: ‖v‖ must be >= 0");
  const double r = h / xi;
  const double log_raw = -0.5 * static_cast<double>(d) * std::log1p(r) + 0.5 * h * v_norm * v_norm / (1.0 + r);
  return clamp_log_bound(log_raw);
}

AcceptanceBound accept_ub_bounded_proposal(double log_pi_at_point, double log_b) {
  if (std::isnan(log_pi_at_point) || std::isnan(log_b)) throw NonFinite("accept_ub_bounded_proposal: NaN");
  return clamp_log_bound(log_b - log_pi_at_point);
}

AcceptanceBound zellner_accept_ub(double h, std::size_t n, double gamma, double g, std::size_t d) {
  check_positive(h, "zellner_accept_ub: h");
  check_positive(g, "zellner_accept_ub: g");
  if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidArgument("zellner_accept_ub: γ must lie in (0, 1)");
  const double root = 1.0 - std::sqrt(gamma);
  const double x = h * static_cast<double>(n) * root * root / (2.0 * g);
  return clamp_log_bound(-0.5 * static_cast<double>(d) * std::log1p(x));
}

AcceptanceBound zellner_empirical_accept_ub(double h, double lambda_min_gram, double g, std::size_t d) {
  check_positive(lambda_min_gram, "zellner_empirical_accept_ub: λ_min(XᵀX)");
  return sc_accept_ub(h, g / lambda_min_gram, d);
}

namespace {

void check_laplace(const LaplaceParams& p) {
  check_positive(p.lambda0, "LaplaceParams: λ₀");
  if (!(p.c > 0.0 && p.c <= 1.0)) throw InvalidArgument("LaplaceParams: c must lie in (0, 1]");
  if (p.n < 1 || p.d < 1) throw InvalidArgument("LaplaceParams: n and d must be >= 1");
}

}  // namespace

double laplace_density_lb(const LaplaceParams& params) {
  check_laplace(params);
  return 0.5 * static_cast<double>(params.d) *
             std::log(static_cast<double>(params.n) / (2.0 * std::numbers::pi * params.lambda0)) -
         std::log1p(params.c);
}

AcceptanceBound laplace_accept_ub(const LaplaceParams& params, double log_b) {
  return accept_ub_bounded_proposal(laplace_density_lb(params), log_b);
}

AcceptanceBound concentration_gaussian_accept_ub(const LaplaceParams& params, double h,
                                                 double log_det_c) {
  check_laplace(params);
  check_positive(h, "concentration_gaussian_accept_ub: h");
  const double log_raw =
      0.5 * static_cast<double>(params.d) * std::log(params.lambda0 / (static_cast<double>(params.n) * h)) +
      std::log1p(params.c) - 0.5 * log_det_c;
  return clamp_log_bound(log_raw);
}

AcceptanceBound mixture_accept_ub(double b, double h, double x, double y) {
  if (!(b > 1.0)) throw InvalidArgument("mixture_accept_ub: b must exceed 1");
  check_positive(h, "mixture_accept_ub: h");
  const double u1 = -(x * x + b * b * y * y);
  const double u2 = -(b * b * x * x + y * y);
  const double hi = std::max(u1, u2);
  const double log_sum = hi + std::log1p(std::exp(std::min(u1, u2) - hi));
  return clamp_log_bound(-std::log(b * h) - log_sum);
}

double rs_combined_acceptance(std::span<const double> probabilities, std::span<const double> acceptances) {
  if (probabilities.size() != acceptances.size() || probabilities.empty()) {
    throw DimensionMismatch("rs_combined_acceptance: one acceptance per component required");
  }
  double total = 0.0, combined = 0.0;
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    if (!(probabilities[k] > 0.0 && probabilities[k] <= 1.0)) {
      throw InvalidArgument("rs_combined_acceptance: probabilities must lie in (0, 1]");
    }
    check_acceptance(acceptances[k], "rs_combined_acceptance");
    total += probabilities[k];
    combined += probabilities[k] * acceptances[k];
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("rs_combined_acceptance: probabilities must sum to 1");
  return std::clamp(combined, 0.0, 1.0);
}

}  // namespace arblobo
