#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "arblobo/errors.hpp"
#include "arblobo/proposals.hpp"
#include "arblobo/quadrature.hpp"
#include "arblobo/targets.hpp"

using namespace arblobo;

namespace {

const double kPi = std::numbers::pi;

// N(m, S) density for 2x2 S via the explicit inverse.
double mvn2(const Vector& x, const Vector& m, const Matrix& s) {
  const double det = s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0);
  const double a = x[0] - m[0], b = x[1] - m[1];
  const double quad = (s(1, 1) * a * a - 2.0 * s(0, 1) * a * b + s(0, 0) * b * b) / det;
  return std::exp(-0.5 * quad) / (2.0 * kPi * std::sqrt(det));
}

}  // namespace

TEST(RwGaussian, SupDensity) {
  EXPECT_NEAR(std::exp(density_sup(make_rw_gaussian(1.0, Matrix::identity(1)))), 1.0 / std::sqrt(2.0 * kPi), 1e-16);
  EXPECT_NEAR(std::exp(density_sup(make_rw_gaussian(1.0, Matrix::identity(2)))), 1.0 / (2.0 * kPi), 1e-16);
  const Vector diag{1.0, 4.0};
  EXPECT_NEAR(std::exp(density_sup(make_rw_gaussian(0.5, Matrix::diagonal(diag)))), 1.0 / (2.0 * kPi), 1e-16);
}

TEST(RwGaussian, Symmetric) {
  const Matrix c(2, 2, std::vector<double>{2.0, 0.3, 0.3, 1.0});
  const ProposalFamily q = make_rw_gaussian(0.7, c);
  const Vector a{0.1, 0.9}, b{-1.0, 0.4};
  EXPECT_NEAR(q.log_q(a, b), q.log_q(b, a), 1e-15);
  EXPECT_EQ(q.kind(), ProposalKind::RandomWalkGaussian);
  EXPECT_NEAR(q.log_det_c(), std::log(2.0 - 0.09), 1e-14);
}

TEST(RwGaussian, MatchesAnalyticDensity) {
  const Matrix c(2, 2, std::vector<double>{2.0, 0.3, 0.3, 1.0});
  const double h = 0.7;
  const ProposalFamily q = make_rw_gaussian(h, c);
  Matrix hc = c;
  hc *= h;
  RandomStream s(1);
  for (int k = 0; k < 50; ++k) {
    const Vector x{s.normal(), s.normal()}, y{s.normal(), s.normal()};
    const double want = mvn2(y, x, hc);
    EXPECT_NEAR(std::exp(q.log_q(x, y)) / want, 1.0, 1e-12);
  }
}

TEST(RwGaussian, Errors) {
  EXPECT_THROW(make_rw_gaussian(0.0, Matrix::identity(1)), InvalidArgument);
  EXPECT_THROW(make_rw_gaussian(1.0, Matrix(2, 2, std::vector<double>{1, 2, 2, 1})), NotPositiveDefinite);
  const ProposalFamily q = make_rw_gaussian(1.0, Matrix::identity(2));
  EXPECT_THROW(q.log_q(Vector{0.0}, Vector{0.0, 0.0}), DimensionMismatch);
}

TEST(MeanMap, IdentityIsRandomWalk) {
  const Matrix c = Matrix::identity(2);
  const ProposalFamily mm = make_mean_map_gaussian([](std::span<const double> t) { return Vector(t.begin(), t.end()); }, 0.4, c);
  const ProposalFamily rw = make_rw_gaussian(0.4, c);
  RandomStream s(2);
  for (int k = 0; k < 20; ++k) {
    const Vector x{s.normal(), s.normal()}, y{s.normal(), s.normal()};
    EXPECT_DOUBLE_EQ(mm.log_q(x, y), rw.log_q(x, y));
  }
}

TEST(MeanMap, MalaLocation) {
  const TargetDensity t = make_gaussian(2.0, 2);
  const double h = 0.3;
  const ProposalFamily mala = make_mala(t, h);
  EXPECT_EQ(mala.kind(), ProposalKind::Mala);
  const Vector x{1.0, -2.0};
  const Vector m = mala.mean(x);
  // ∇log π(x) = −x/2.
  EXPECT_NEAR(m[0], x[0] * (1.0 - h / 4.0), 1e-15);
  EXPECT_NEAR(m[1], x[1] * (1.0 - h / 4.0), 1e-15);
  const ProposalFamily via_map = make_mean_map_gaussian(
      [&](std::span<const double> th) {
        Vector g = t.grad_log_density(th);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] = th[i] + 0.5 * h * g[i];
        return g;
      },
      h, Matrix::identity(2));
  EXPECT_DOUBLE_EQ(mala.log_q(x, Vector{0.3, 0.2}), via_map.log_q(x, Vector{0.3, 0.2}));
}

TEST(MeanMap, ConstantIsIndependence) {
  const Vector center{0.5, -0.5};
  const ProposalFamily ind = make_independence(center, 1.5, Matrix::identity(2));
  EXPECT_EQ(ind.mean(Vector{10.0, 3.0}), center);
  EXPECT_DOUBLE_EQ(ind.log_q(Vector{10.0, 3.0}, Vector{0.0, 0.0}), ind.log_q(Vector{-4.0, 1.0}, Vector{0.0, 0.0}));
}

TEST(CrankNicolson, FullStepIsIndependent) {
  const ProposalFamily cn = make_crank_nicolson(1.0, 2);
  EXPECT_EQ(cn.mean(Vector{3.0, -1.0}), (Vector{0.0, 0.0}));
  EXPECT_NEAR(cn.log_q(Vector{3.0, -1.0}, Vector{0.2, 0.1}), std::log(mvn2({0.2, 0.1}, {0, 0}, Matrix::identity(2))), 1e-14);
  EXPECT_THROW(make_crank_nicolson(1.5, 1), InvalidArgument);
  EXPECT_THROW(make_crank_nicolson(0.0, 1), InvalidArgument);
}

TEST(CrankNicolson, PreservesStandardGaussian) {
  const ProposalFamily cn = make_crank_nicolson(0.3, 1);
  RandomStream s(3);
  const int n = 100000;
  double m1 = 0.0, m2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vector th{s.normal()};
    const double y = cn.sample(th, s)[0];
    m1 += y;
    m2 += y * y;
  }
  EXPECT_NEAR(m1 / n, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(m2 / n, 1.0, 4.0 * std::sqrt(2.0 / n));
}

TEST(CrankNicolson, SupDensity) {
  EXPECT_NEAR(density_sup(make_crank_nicolson(0.25, 1)), -0.5 * std::log(2.0 * kPi * 0.25), 1e-15);
  EXPECT_NEAR(density_sup(make_crank_nicolson(0.5, 3)), -1.5 * std::log(2.0 * kPi * 0.5), 1e-14);
}

TEST(StudentT, CauchyModeDensity) {
  const ProposalFamily t = make_student_t_proposal(1.0, {}, 1.0, Matrix::identity(1));
  EXPECT_NEAR(std::exp(density_sup(t)), 1.0 / kPi, 1e-15);
  EXPECT_NEAR(std::exp(t.log_q(Vector{0.0}, Vector{0.0})), 1.0 / kPi, 1e-15);
  EXPECT_NEAR(std::exp(t.log_q(Vector{0.0}, Vector{1.0})), 1.0 / (2.0 * kPi), 1e-15);
}

TEST(StudentT, Normalized) {
  const ProposalFamily t = make_student_t_proposal(3.0, {}, 1.0, Matrix::identity(1));
  const Vector x{0.4};
  auto f = [&](double y) { return std::exp(t.log_q(x, Vector{y})); };
  // Tail mass beyond ±1000 for t₃ is about 1e-9.
  EXPECT_NEAR(quadrature_1d(f, -1000.0, 1000.0, 4000), 1.0, 1e-6);
}

TEST(StudentT, LargeDofApproachesGaussian) {
  const ProposalFamily t = make_student_t_proposal(1e6, {}, 1.0, Matrix::identity(2));
  const double gaussian_b = 1.0 / (2.0 * kPi);
  EXPECT_NEAR(std::exp(density_sup(t)) / gaussian_b, 1.0, 1e-3);
}

TEST(StudentT, SupUsesModeDensity) {
  // The bound without the ν^{d/2} factor undercuts the mode density when ν < 1.
  const double dof = 0.5;
  const ProposalFamily t = make_student_t_proposal(dof, {}, 1.0, Matrix::identity(2));
  const double mode = t.log_q(Vector{0.0, 0.0}, Vector{0.0, 0.0});
  EXPECT_NEAR(density_sup(t), mode, 1e-14);
  EXPECT_LT(student_t_log_sup_without_dof_factor(dof, 1.0, Matrix::identity(2)), mode);
  EXPECT_THROW(make_student_t_proposal(0.0, {}, 1.0, Matrix::identity(1)), InvalidArgument);
}

TEST(Proposal, SamplingDeterministic) {
  const ProposalFamily q = make_rw_gaussian(1.0, Matrix::identity(3));
  RandomStream a(5), b(5);
  const Vector x{0.0, 1.0, 2.0};
  for (int i = 0; i < 5; ++i) EXPECT_EQ(q.sample(x, a), q.sample(x, b));
}

TEST(Proposal, KindNames) {
  EXPECT_EQ(to_string(ProposalKind::CrankNicolson), "crank-nicolson");
  EXPECT_EQ(to_string(ProposalKind::StudentT), "student-t");
}
