#include "arblobo/targets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "arblobo/errors.hpp"

namespace arblobo {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kLog2Pi = std::log(2.0 * std::numbers::pi);

double squared_norm(std::span<const double> v) { return dot(v, v); }

}  // namespace

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

TargetDensity::TargetDensity(TargetParts parts) : parts_(std::move(parts)) {
  if (parts_.dim == 0) throw InvalidArgument("TargetDensity: dimension must be positive");
  if (!parts_.log_density) throw InvalidArgument("TargetDensity: log_density is required");
}

void TargetDensity::check_dim(std::span<const double> theta) const {
  if (theta.size() != parts_.dim) {
    throw DimensionMismatch(parts_.name + ": expected a point of dimension " +
                            std::to_string(parts_.dim) + ", got " + std::to_string(theta.size()));
  }
}

bool TargetDensity::in_support(std::span<const double> theta) const {
  check_dim(theta);
  for (double v : theta)
    if (!std::isfinite(v)) return false;
  return !parts_.in_support || parts_.in_support(theta);
}

double TargetDensity::log_density(std::span<const double> theta) const {
  if (!in_support(theta)) return kNegInf;
  const double v = parts_.log_density(theta);
  return std::isnan(v) ? kNegInf : v;
}

Vector TargetDensity::grad_log_density(std::span<const double> theta) const {
  if (!has_gradient()) throw InvalidArgument(parts_.name + ": gradient unavailable");
  check_dim(theta);
  return parts_.grad_log_density(theta);
}

Matrix TargetDensity::hessian_neg_log(std::span<const double> theta) const {
  if (!has_hessian()) throw InvalidArgument(parts_.name + ": Hessian unavailable");
  check_dim(theta);
  return parts_.hessian_neg_log(theta);
}

void LogisticData::validate() const {
  if (y.size() != x.rows()) {
    throw DimensionMismatch("LogisticData: " + std::to_string(x.rows()) + " rows but " +
                            std::to_string(y.size()) + " responses");
  }
  for (int v : y)
    if (v != 0 && v != 1) throw InvalidArgument("LogisticData: responses must be 0 or 1");
  if (!x.all_finite()) throw NonFinite("LogisticData: non-finite covariate");
}

TargetDensity make_gaussian(double sigma2, std::size_t d) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw InvalidArgument("make_gaussian: variance must be positive");
  }
  if (d == 0) throw InvalidArgument("make_gaussian: dimension must be positive");
  const double log_norm = -0.5 * static_cast<double>(d) * (kLog2Pi + std::log(sigma2));
  TargetParts p;
  p.kind = TargetKind::Gaussian;
  p.name = "gaussian";
  p.dim = d;
  p.log_density = [=](std::span<const double> t) { return log_norm - squared_norm(t) / (2.0 * sigma2); };
  p.grad_log_density = [=](std::span<const double> t) {
    Vector g(t.begin(), t.end());
    for (double& v : g) v /= -sigma2;
    return g;
  };
  p.hessian_neg_log = [=](std::span<const double>) { return (1.0 / sigma2) * Matrix::identity(d); };
  p.log_sup_density = log_norm;
  p.strong_convexity = sigma2;
  p.known_mode = Vector(d, 0.0);
  return TargetDensity(std::move(p));
}

TargetDensity make_gaussian_mixture_2d(double b) {
  if (!(b > 1.0) || !std::isfinite(b)) throw InvalidArgument("make_gaussian_mixture_2d: b must exceed 1");
  const double b2 = b * b;
  const double log_c = std::log(b / (2.0 * std::numbers::pi));
  TargetParts p;
  p.kind = TargetKind::GaussianMixture2d;
  p.name = "gaussian_mixture_2d";
  p.dim = 2;
  p.log_density = [=](std::span<const double> t) {
    const double u1 = -(t[0] * t[0] + b2 * t[1] * t[1]);
    const double u2 = -(b2 * t[0] * t[0] + t[1] * t[1]);
    const double hi = std::max(u1, u2);
    return log_c + hi + std::log1p(std::exp(std::min(u1, u2) - hi));
  };
  p.grad_log_density = [=](std::span<const double> t) {
    const double u1 = -(t[0] * t[0] + b2 * t[1] * t[1]);
    const double u2 = -(b2 * t[0] * t[0] + t[1] * t[1]);
    const double w1 = sigmoid(u1 - u2);
    const double w2 = 1.0 - w1;
    return Vector{w1 * (-2.0 * t[0]) + w2 * (-2.0 * b2 * t[0]),
                  w1 * (-2.0 * b2 * t[1]) + w2 * (-2.0 * t[1])};
  };
  p.log_sup_density = std::log(b / std::numbers::pi);
  p.known_mode = Vector{0.0, 0.0};
  return TargetDensity(std::move(p));
}

TargetDensity make_subexponential_2d() {
  TargetParts p;
  p.kind = TargetKind::Subexponential2d;
  p.name = "subexponential_2d";
  p.dim = 2;
  p.log_density = [](std::span<const double> t) {
    const double a = t[0] * t[0], c = t[1] * t[1];
    return -(a + a * c + c);
  };
  p.grad_log_density = [](std::span<const double> t) {
    return Vector{-2.0 * t[0] * (1.0 + t[1] * t[1]), -2.0 * t[1] * (1.0 + t[0] * t[0])};
  };
  p.hessian_neg_log = [](std::span<const double> t) {
    Matrix h(2, 2);
    h(0, 0) = 2.0 + 2.0 * t[1] * t[1];
    h(1, 1) = 2.0 + 2.0 * t[0] * t[0];
    h(0, 1) = h(1, 0) = 4.0 * t[0] * t[1];
    return h;
  };
  p.known_mode = Vector{0.0, 0.0};
  return TargetDensity(std::move(p));
}

TargetDensity conditional_1d(const TargetDensity& target, int fixed_index, double fixed_value) {
  if (target.kind() != TargetKind::Subexponential2d) {
    throw InvalidArgument("conditional_1d: only defined for the sub-exponential 2-D target");
  }
  if (fixed_index != 1 && fixed_index != 2) {
    throw InvalidArgument("conditional_1d: fixed index must be 1 or 2");
  }
  if (!std::isfinite(fixed_value)) throw NonFinite("conditional_1d: fixed value is not finite");
  return make_gaussian(1.0 / (2.0 * (1.0 + fixed_value * fixed_value)), 1);
}

namespace {

struct LogisticModel {
  LogisticData data;
  Matrix gram;

  Vector linear_predictor(std::span<const double> beta) const { return data.x * beta; }

  double log_likelihood(std::span<const double> beta) const {
    const Vector z = linear_predictor(beta);
    double s = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) s -= softplus(z[i]) - data.y[i] * z[i];
    return s;
  }

  Vector grad_log_likelihood(std::span<const double> beta) const {
    Vector r = linear_predictor(beta);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = data.y[i] - sigmoid(r[i]);
    return transpose_times(data.x, r);
  }

  Matrix hessian_neg_log_likelihood(std::span<const double> beta) const {
    const Vector z = linear_predictor(beta);
    const std::size_t d = data.d();
    Matrix h(d, d);
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double s = sigmoid(z[i]);
      const double w = s * (1.0 - s);
      const auto row = data.x.row(i);
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a; b < d; ++b) h(a, b) += w * row[a] * row[b];
    }
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < a; ++b) h(a, b) = h(b, a);
    return h;
  }
};

std::shared_ptr<const LogisticModel> make_model(const LogisticData& data) {
  data.validate();
  if (data.d() == 0) throw InvalidArgument("logistic target: dimension must be positive");
  return std::make_shared<const LogisticModel>(LogisticModel{data, gram(data.x)});
}

TargetParts logistic_parts(std::shared_ptr<const LogisticModel> model) {
  TargetParts p;
  p.dim = model->data.d();
  p.log_density = [model](std::span<const double> b) { return model->log_likelihood(b); };
  p.grad_log_density = [model](std::span<const double> b) { return model->grad_log_likelihood(b); };
  p.hessian_neg_log = [model](std::span<const double> b) {
    return model->hessian_neg_log_likelihood(b);
  };
  return p;
}

double smallest_eigenvalue(const Matrix& m) { return sym_eigen(m).values.back(); }

}  // namespace

TargetDensity make_logistic_flat(const LogisticData& data) {
  auto model = make_model(data);
  const double lmin = data.n() < data.d() ? 0.0 : smallest_eigenvalue(model->gram);
  if (!(lmin > 1e-10)) {
    throw RankDeficient("make_logistic_flat: X is not full column rank (λ_min(XᵀX) = " +
                        std::to_string(lmin) + ")");
  }
  TargetParts p = logistic_parts(model);
  p.kind = TargetKind::LogisticFlat;
  p.name = "logistic_flat";
  return TargetDensity(std::move(p));
}

TargetDensity make_logistic_zellner(const LogisticData& data, double g) {
  if (!(g > 0.0) || !std::isfinite(g)) throw InvalidArgument("make_logistic_zellner: g must be positive");
  auto model = make_model(data);
  cholesky(model->gram);  // throws NotPositiveDefinite when XᵀX is singular
  const double lmin = smallest_eigenvalue(model->gram);
  if (!(lmin > 0.0)) throw NotPositiveDefinite("make_logistic_zellner: XᵀX is not positive definite");

  TargetParts p;
  p.kind = TargetKind::LogisticZellner;
  p.name = "logistic_zellner";
  p.dim = data.d();
  p.log_density = [model, g](std::span<const double> b) {
    const Vector gb = model->gram * b;
    return model->log_likelihood(b) - dot(b, gb) / (2.0 * g);
  };
  p.grad_log_density = [model, g](std::span<const double> b) {
    Vector grad = model->grad_log_likelihood(b);
    const Vector gb = model->gram * b;
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] -= gb[i] / g;
    return grad;
  };
  p.hessian_neg_log = [model, g](std::span<const double> b) {
    return model->hessian_neg_log_likelihood(b) + (1.0 / g) * model->gram;
  };
  p.strong_convexity = g / lmin;
  return TargetDensity(std::move(p));
}

TargetDensity make_logistic_gaussian_prior(const LogisticData& data, double prior_variance) {
  if (!(prior_variance > 0.0) || !std::isfinite(prior_variance)) {
    throw InvalidArgument("make_logistic_gaussian_prior: prior variance must be positive");
  }
  auto model = make_model(data);
  const std::size_t d = data.d();
  TargetParts p;
  p.kind = TargetKind::LogisticGaussianPrior;
  p.name = "logistic_gaussian_prior";
  p.dim = d;
  p.log_density = [model, prior_variance](std::span<const double> b) {
    return model->log_likelihood(b) - dot(b, b) / (2.0 * prior_variance);
  };
  p.grad_log_density = [model, prior_variance](std::span<const double> b) {
    Vector grad = model->grad_log_likelihood(b);
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] -= b[i] / prior_variance;
    return grad;
  };
  p.hessian_neg_log = [model, prior_variance, d](std::span<const double> b) {
    return model->hessian_neg_log_likelihood(b) + (1.0 / prior_variance) * Matrix::identity(d);
  };
  p.strong_convexity = prior_variance;
  return TargetDensity(std::move(p));
}

double smallest_hessian_eigenvalue(const TargetDensity& target, std::span<const double> point) {
  if (!target.has_hessian()) {
    throw InvalidArgument("smallest_hessian_eigenvalue: " + target.name() + " has no Hessian");
  }
  return smallest_eigenvalue(target.hessian_neg_log(point));
}

}  // namespace arblobo
