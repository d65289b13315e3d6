#include "arblobo/wasserstein_1d.hpp"

#include <algorithm>
#include <cmath>

#include "arblobo/errors.hpp"

namespace arblobo {

double empirical_w1_1d(std::span<const double> sorted_a, std::span<const double> sorted_b) {
  if (sorted_a.empty() || sorted_b.empty()) throw InvalidArgument("empirical_w1_1d: empty sample");
  if (sorted_a.size() != sorted_b.size()) {
    throw DimensionMismatch("empirical_w1_1d: sample sizes differ");
  }
  if (!std::is_sorted(sorted_a.begin(), sorted_a.end()) ||
      !std::is_sorted(sorted_b.begin(), sorted_b.end())) {
    throw InvalidArgument("empirical_w1_1d: samples must be sorted");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < sorted_a.size(); ++i) total += std::abs(sorted_a[i] - sorted_b[i]);
  return total / static_cast<double>(sorted_a.size());
}

}  // namespace arblobo
