#pragma once

#include <span>

namespace arblobo {

/// W1 between two equal-size empirical measures on the line, given sorted samples:
/// (1/n) Σ |a₍ᵢ₎ − b₍ᵢ₎|.
double empirical_w1_1d(std::span<const double> sorted_a, std::span<const double> sorted_b);

}  // namespace arblobo
