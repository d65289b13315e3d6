#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arblobo/linalg.hpp"

namespace arblobo {

enum class TargetKind {
  Gaussian,
  GaussianMixture2d,
  Subexponential2d,
  LogisticFlat,
  LogisticZellner,
  LogisticGaussianPrior,
  Custom,
};

using LogDensityFn = std::function<double(std::span<const double>)>;
using GradientFn = std::function<Vector(std::span<const double>)>;
using HessianFn = std::function<Matrix(std::span<const double>)>;
using SupportFn = std::function<bool(std::span<const double>)>;

/// Everything a factory fills in to describe a target.
struct TargetParts {
  TargetKind kind = TargetKind::Custom;
  std::string name;
  std::size_t dim = 0;
  LogDensityFn log_density;
  /// ∇ log π.
  GradientFn grad_log_density;
  /// ∇²(−log π).
  HessianFn hessian_neg_log;
  /// log s where s ≥ sup π; only meaningful for normalized densities.
  std::optional<double> log_sup_density;
  /// ξ such that −log π is ξ⁻¹-strongly convex.
  std::optional<double> strong_convexity;
  std::optional<Vector> known_mode;
  /// Empty means the support is all of ℝ^d.
  SupportFn in_support;
};

/// A (possibly unnormalized) target density on ℝ^d. Immutable once built.
class TargetDensity {
 public:
  explicit TargetDensity(TargetParts parts);

  TargetKind kind() const { return parts_.kind; }
  const std::string& name() const { return parts_.name; }
  std::size_t dim() const { return parts_.dim; }

  /// log π(θ); −∞ off the support.
  double log_density(std::span<const double> theta) const;
  bool in_support(std::span<const double> theta) const;

  bool has_gradient() const { return static_cast<bool>(parts_.grad_log_density); }
  Vector grad_log_density(std::span<const double> theta) const;

  bool has_hessian() const { return static_cast<bool>(parts_.hessian_neg_log); }
  Matrix hessian_neg_log(std::span<const double> theta) const;

  const std::optional<double>& log_sup_density() const { return parts_.log_sup_density; }
  const std::optional<double>& strong_convexity() const { return parts_.strong_convexity; }
  const std::optional<Vector>& known_mode() const { return parts_.known_mode; }

 private:
  void check_dim(std::span<const double> theta) const;

  TargetParts parts_;
};

/// Binary-response regression data: X is n×d, y ∈ {0,1}ⁿ.
struct LogisticData {
  Matrix x;
  std::vector<int> y;

  std::size_t n() const { return x.rows(); }
  std::size_t d() const { return x.cols(); }
  /// Throws InvalidArgument on inconsistent sizes or non-binary responses.
  void validate() const;
};

/// N(0, σ²I_d), normalized.
TargetDensity make_gaussian(double sigma2, std::size_t d);

/// Equal-weight mixture of (b/π)e^{−(x²+b²y²)} and (b/π)e^{−(b²x²+y²)}, b > 1.
TargetDensity make_gaussian_mixture_2d(double b);

/// Unnormalized exp{−(θ₁² + θ₁²θ₂² + θ₂²)}.
TargetDensity make_subexponential_2d();

/// Exact full conditional of the sub-exponential target: coordinate
/// `fixed_index` (1 or 2) is held at `fixed_value`, and the remaining one is
/// N(0, 1/(2(1+v²))).
TargetDensity conditional_1d(const TargetDensity& target, int fixed_index, double fixed_value);

/// Flat-prior logistic regression posterior (unnormalized).
TargetDensity make_logistic_flat(const LogisticData& data);

/// Logistic posterior with Zellner's g-prior N(0, g(XᵀX)⁻¹).
TargetDensity make_logistic_zellner(const LogisticData& data, double g);

/// Logistic posterior with N(0, σ²_prior I) prior. Accepts n = 0.
TargetDensity make_logistic_gaussian_prior(const LogisticData& data, double prior_variance);

/// λ_min of ∇²(−log π) at `point`.
double smallest_hessian_eigenvalue(const TargetDensity& target, std::span<const double> point);

/// log(1 + e^z) without overflow.
double softplus(double z);
/// 1 / (1 + e^{−z}) without overflow.
double sigmoid(double z);

}  // namespace arblobo
