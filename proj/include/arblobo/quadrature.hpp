#pragma once

#include <array>
#include <functional>

namespace arblobo {

/// Nodes and weights of the 16-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre16 {
  std::array<double, 16> nodes;
  std::array<double, 16> weights;
};

const GaussLegendre16& gauss_legendre_16();

/// Composite 16-node Gauss-Legendre rule over `panels` equal panels of [a, b].
/// Throws NonFinite if the integrand returns a non-finite value.
double quadrature_1d(const std::function<double(double)>& f, double a, double b, int panels);

/// Tensor-product version over [ax, bx] × [ay, by].
double quadrature_2d(const std::function<double(double, double)>& f, double ax, double bx,
                     double ay, double by, int panels);

}  // namespace arblobo
