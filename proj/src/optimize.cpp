#include "arblobo/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "arblobo/errors.hpp"

namespace arblobo {

OptimizerResult gradient_descent(const Objective& objective, const Gradient& gradient, Vector x0,
                                 const GradientDescentOptions& options) {
  if (!(options.tolerance > 0.0)) throw InvalidArgument("gradient_descent: tolerance must be positive");
  constexpr double kEps = std::numeric_limits<double>::epsilon();

  OptimizerResult result;
  Vector x = std::move(x0);
  double fx = objective(x);
  Vector g = gradient(x);
  double gnorm = norm2(g);
  if (!std::isfinite(fx) || !std::isfinite(gnorm)) {
    throw NonFinite("gradient_descent: objective or gradient not finite at start");
  }

  Vector trial(x.size());
  for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
    if (gnorm <= options.tolerance) {
      result.converged = true;
      result.iterations = iter;
      break;
    }
    const double g2 = gnorm * gnorm;
    double step = options.initial_step;
    bool accepted = false;
    for (int k = 0; k < 200; ++k, step *= options.shrink) {
      for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] - step * g[i];
      const double ft = objective(trial);
      if (!std::isfinite(ft)) continue;
      // Near the optimum the change in f sinks below its rounding noise and
      // the Armijo test turns into a coin flip; there the step is judged by
      // the gradient norm instead.
      const double noise = 16.0 * kEps * std::max(1.0, std::abs(fx));
      if (step * g2 > 64.0 * noise) {
        accepted = ft <= fx - options.armijo * step * g2;
      } else if (ft <= fx + noise) {
        accepted = norm2(gradient(trial)) < gnorm;
      }
      if (accepted) {
        x = trial;
        fx = ft;
        break;
      }
    }
    if (!accepted) {
      result.iterations = iter;
      break;
    }
    if (norm2(x) > options.max_norm) {
      throw DivergenceSuspected("gradient_descent: iterate norm exceeded " +
                                std::to_string(options.max_norm) + " after " +
                                std::to_string(iter + 1) + " iterations");
    }
    g = gradient(x);
    gnorm = norm2(g);
    result.iterations = iter + 1;
  }
  if (gnorm <= options.tolerance) result.converged = true;

  result.minimizer = std::move(x);
  result.value = fx;
  result.gradient_norm = gnorm;
  if (!result.converged) {
    std::ostringstream msg;
    msg << "gradient_descent: gradient norm " << gnorm << " above tolerance after " << result.iterations
        << " iterations";
    throw MaxIterExceeded(msg.str());
  }
  return result;
}

double check_gradient(const Objective& f, const Gradient& grad, std::span<const double> x,
                      double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("check_gradient: eps must be positive");
  const Vector g = grad(x);
  if (g.size() != x.size()) throw DimensionMismatch("check_gradient: gradient length");
  Vector probe(x.begin(), x.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + eps;
    const double up = f(probe);
    probe[i] = x[i] - eps;
    const double down = f(probe);
    probe[i] = x[i];
    const double fd = (up - down) / (2.0 * eps);
    if (!std::isfinite(fd) || !std::isfinite(g[i])) {
      throw NonFinite("check_gradient: non-finite value at coordinate " + std::to_string(i));
    }
    worst = std::max(worst, std::abs(g[i] - fd) / (1.0 + std::abs(g[i])));
  }
  return worst;
}

}  // namespace arblobo
