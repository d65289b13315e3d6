#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "arblobo/linalg.hpp"

namespace arblobo {

using Objective = std::function<double(std::span<const double>)>;
using Gradient = std::function<Vector(std::span<const double>)>;

struct OptimizerResult {
  Vector minimizer;
  double value = 0.0;
  double gradient_norm = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

struct GradientDescentOptions {
  double tolerance = 1e-8;
  std::size_t max_iter = 100000;
  /// ‖x‖₂ above this raises DivergenceSuspected.
  double max_norm = 1e6;
  double armijo = 1e-4;
  double shrink = 0.5;
  double initial_step = 1.0;
};

/// Steepest descent with Armijo backtracking.
///
/// Throws DivergenceSuspected when an iterate leaves the ball of radius
/// max_norm and MaxIterExceeded when the gradient tolerance is not met in
/// max_iter iterations.
OptimizerResult gradient_descent(const Objective& objective, const Gradient& gradient, Vector x0,
                                 const GradientDescentOptions& options = {});

/// maxᵢ |gradᵢ − central differenceᵢ| / (1 + |gradᵢ|).
double check_gradient(const Objective& f, const Gradient& grad, std::span<const double> x,
                      double eps = 1e-5);

}  // namespace arblobo
