#include "arblobo/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "arblobo/errors.hpp"

namespace arblobo {
namespace {

GaussLegendre16 build_rule() {
  constexpr int n = 16;
  GaussLegendre16 rule{};
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

void check_interval(double a, double b, int panels) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw InvalidArgument("quadrature: require finite a < b");
  }
  if (panels < 1) throw InvalidArgument("quadrature: panels must be >= 1");
}

}  // namespace

const GaussLegendre16& gauss_legendre_16() {
  static const GaussLegendre16 rule = build_rule();
  return rule;
}

double quadrature_1d(const std::function<double(double)>& f, double a, double b, int panels) {
  check_interval(a, b, panels);
  const auto& rule = gauss_legendre_16();
  const double width = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    double s = 0.0;
    for (int i = 0; i < 16; ++i) {
      const double v = f(mid + 0.5 * width * rule.nodes[i]);
      if (!std::isfinite(v)) throw NonFinite("quadrature_1d: integrand is not finite");
      s += rule.weights[i] * v;
    }
    total += 0.5 * width * s;
  }
  return total;
}

double quadrature_2d(const std::function<double(double, double)>& f, double ax, double bx,
                     double ay, double by, int panels) {
  check_interval(ax, bx, panels);
  check_interval(ay, by, panels);
  return quadrature_1d(
      [&](double x) { return quadrature_1d([&](double y) { return f(x, y); }, ay, by, panels); }, ax,
      bx, panels);
}

}  // namespace arblobo
