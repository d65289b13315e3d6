#include "arblobo/proposals.hpp"

#include <cmath>
#include <numbers>

#include "arblobo/errors.hpp"
#include "arblobo/sampling.hpp"

namespace arblobo {
namespace {

const double kLogPi = std::log(std::numbers::pi);
const double kLog2Pi = std::log(2.0 * std::numbers::pi);

}  // namespace

std::string_view to_string(ProposalKind kind) {
  switch (kind) {
    case ProposalKind::RandomWalkGaussian: return "random-walk-gaussian";
    case ProposalKind::MeanMapGaussian: return "mean-map-gaussian";
    case ProposalKind::Mala: return "mala";
    case ProposalKind::Independence: return "independence";
    case ProposalKind::CrankNicolson: return "crank-nicolson";
    case ProposalKind::StudentT: return "student-t";
  }
  return "unknown";
}

ProposalFamily make_location_scale(ProposalKind kind, MeanMap mean_map, double h, const Matrix& c,
                                   std::optional<double> dof) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument("proposal: h must be positive");
  if (dof && !(*dof > 0.0)) throw InvalidArgument("proposal: degrees of freedom must be positive");
  const Matrix c_factor = cholesky(c);

  ProposalFamily p;
  p.kind_ = kind;
  p.dim_ = c.rows();
  p.mean_map_ = std::move(mean_map);
  p.h_ = h;
  p.scale_ = std::sqrt(h) * c_factor;
  p.log_det_c_ = log_det_from_cholesky(c_factor);
  p.dof_ = dof;

  const double d = static_cast<double>(p.dim_);
  if (dof) {
    const double nu = *dof;
    p.log_norm_ = std::lgamma(0.5 * (nu + d)) - std::lgamma(0.5 * nu) -
                  0.5 * d * (std::log(nu) + kLogPi + std::log(h)) - 0.5 * p.log_det_c_;
  } else {
    p.log_norm_ = -0.5 * d * (kLog2Pi + std::log(h)) - 0.5 * p.log_det_c_;
  }
  // Both shapes peak at the location, so the mode density is the normalizer.
  p.log_sup_ = p.log_norm_;
  return p;
}

Vector ProposalFamily::mean(std::span<const double> theta) const {
  if (theta.size() != dim_) throw DimensionMismatch("proposal: state has wrong dimension");
  if (!mean_map_) return Vector(theta.begin(), theta.end());
  Vector m = mean_map_(theta);
  if (m.size() != dim_) throw DimensionMismatch("proposal: mean map returned wrong dimension");
  return m;
}

Vector ProposalFamily::sample(std::span<const double> theta, RandomStream& stream) const {
  const Vector m = mean(theta);
  return dof_ ? sample_student_t(stream, *dof_, m, scale_) : sample_gaussian(stream, m, scale_);
}

double ProposalFamily::log_q(std::span<const double> theta, std::span<const double> theta_next) const {
  if (theta_next.size() != dim_) throw DimensionMismatch("proposal: target point has wrong dimension");
  Vector m = mean(theta);
  for (std::size_t i = 0; i < dim_; ++i) m[i] = theta_next[i] - m[i];
  const Vector z = solve_lower(scale_, m);
  const double quad = dot(z, z);
  if (dof_) {
    const double nu = *dof_;
    return log_norm_ - 0.5 * (nu + static_cast<double>(dim_)) * std::log1p(quad / nu);
  }
  return log_norm_ - 0.5 * quad;
}

ProposalFamily make_rw_gaussian(double h, const Matrix& c) {
  return make_location_scale(ProposalKind::RandomWalkGaussian, {}, h, c, std::nullopt);
}

ProposalFamily make_mean_map_gaussian(MeanMap mu, double h, const Matrix& c, ProposalKind kind) {
  if (!mu) throw InvalidArgument("make_mean_map_gaussian: mean map is required");
  return make_location_scale(kind, std::move(mu), h, c, std::nullopt);
}

ProposalFamily make_mala(const TargetDensity& target, double h) {
  if (!target.has_gradient()) throw InvalidArgument("make_mala: target has no gradient");
  MeanMap mu = [target, h](std::span<const double> theta) {
    Vector m = target.grad_log_density(theta);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = theta[i] + 0.5 * h * m[i];
    return m;
  };
  return make_mean_map_gaussian(std::move(mu), h, Matrix::identity(target.dim()), ProposalKind::Mala);
}

ProposalFamily make_independence(Vector center, double h, const Matrix& c) {
  if (center.size() != c.rows()) throw DimensionMismatch("make_independence: center dimension");
  MeanMap mu = [center = std::move(center)](std::span<const double>) { return center; };
  return make_mean_map_gaussian(std::move(mu), h, c, ProposalKind::Independence);
}

ProposalFamily make_crank_nicolson(double h, std::size_t d) {
  if (!(h > 0.0 && h <= 1.0)) throw InvalidArgument("make_crank_nicolson: h must lie in (0, 1]");
  if (d == 0) throw InvalidArgument("make_crank_nicolson: dimension must be positive");
  const double shrink = std::sqrt(1.0 - h);
  MeanMap mu = [shrink](std::span<const double> theta) {
    Vector m(theta.begin(), theta.end());
    for (double& v : m) v *= shrink;
    return m;
  };
  return make_mean_map_gaussian(std::move(mu), h, Matrix::identity(d), ProposalKind::CrankNicolson);
}

ProposalFamily make_student_t_proposal(double dof, MeanMap mu, double h, const Matrix& c) {
  if (!(dof > 0.0) || !std::isfinite(dof)) {
    throw InvalidArgument("make_student_t_proposal: degrees of freedom must be positive");
  }
  return make_location_scale(ProposalKind::StudentT, std::move(mu), h, c, dof);
}

double density_sup(const ProposalFamily& proposal) {
  if (!proposal.log_density_sup()) throw Unbounded("density_sup: proposal density is unbounded");
  return *proposal.log_density_sup();
}

double student_t_log_sup_without_dof_factor(double dof, double h, const Matrix& c) {
  if (!(dof > 0.0) || !(h > 0.0)) throw InvalidArgument("student_t bound: invalid parameters");
  const double d = static_cast<double>(c.rows());
  const double log_det_c = log_det_from_cholesky(cholesky(c));
  return std::lgamma(0.5 * (dof + d)) - std::lgamma(0.5 * dof) - 0.5 * d * (std::log(h) + kLogPi) -
         0.5 * log_det_c;
}

}  // namespace arblobo
