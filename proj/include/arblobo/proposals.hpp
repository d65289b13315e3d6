#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>

#include "arblobo/linalg.hpp"
#include "arblobo/random.hpp"
#include "arblobo/targets.hpp"

namespace arblobo {

enum class ProposalKind {
  RandomWalkGaussian,
  MeanMapGaussian,
  Mala,
  Independence,
  CrankNicolson,
  StudentT,
};

std::string_view to_string(ProposalKind kind);

using MeanMap = std::function<Vector(std::span<const double>)>;

/// Location-scale proposal Q(θ,·) = law of μ(θ) + L·Z, where L·Lᵀ = hC and Z
/// is either standard Gaussian or standard multivariate t with ν degrees of
/// freedom.
class ProposalFamily {
 public:
  ProposalKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  double h() const { return h_; }
  /// Cholesky factor of hC.
  const Matrix& scale_factor() const { return scale_; }
  /// log det C (not hC).
  double log_det_c() const { return log_det_c_; }
  /// ν for the t family; empty for Gaussian families.
  const std::optional<double>& dof() const { return dof_; }

  Vector mean(std::span<const double> theta) const;
  Vector sample(std::span<const double> theta, RandomStream& stream) const;
  /// log q(θ, θ').
  double log_q(std::span<const double> theta, std::span<const double> theta_next) const;
  /// log B with q ≤ B everywhere.
  const std::optional<double>& log_density_sup() const { return log_sup_; }

 private:
  friend ProposalFamily make_location_scale(ProposalKind, MeanMap, double, const Matrix&,
                                            std::optional<double>);

  ProposalKind kind_ = ProposalKind::RandomWalkGaussian;
  std::size_t dim_ = 0;
  MeanMap mean_map_;  // empty means identity
  double h_ = 1.0;
  Matrix scale_;
  double log_det_c_ = 0.0;
  double log_norm_ = 0.0;
  std::optional<double> dof_;
  std::optional<double> log_sup_;
};

/// Shared constructor behind every factory below.
ProposalFamily make_location_scale(ProposalKind kind, MeanMap mean_map, double h, const Matrix& c,
                                   std::optional<double> dof);

/// N(θ, hC).
ProposalFamily make_rw_gaussian(double h, const Matrix& c);
/// N(μ(θ), hC).
ProposalFamily make_mean_map_gaussian(MeanMap mu, double h, const Matrix& c,
                                      ProposalKind kind = ProposalKind::MeanMapGaussian);
/// N(θ + h∇log π(θ)/2, hI).
ProposalFamily make_mala(const TargetDensity& target, double h);
/// N(center, hC), independent of θ.
ProposalFamily make_independence(Vector center, double h, const Matrix& c);
/// N(√(1−h)θ, hI_d), h ∈ (0, 1].
ProposalFamily make_crank_nicolson(double h, std::size_t d);
/// t_ν(μ(θ), hC). An empty μ means the random-walk location μ(θ) = θ.
ProposalFamily make_student_t_proposal(double dof, MeanMap mu, double h, const Matrix& c);

/// log B; throws Unbounded if the family has no finite density supremum.
double density_sup(const ProposalFamily& proposal);

/// log of Γ((ν+d)/2) / (Γ(ν/2) (hπ)^{d/2} det(C)^{1/2}): the t bound written
/// without the ν^{d/2} factor of the mode density. Kept for comparison only;
/// for ν < 1 it is smaller than the true supremum.
double student_t_log_sup_without_dof_factor(double dof, double h, const Matrix& c);

}  // namespace arblobo
