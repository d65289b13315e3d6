#pragma once

#include <span>

#include "arblobo/linalg.hpp"
#include "arblobo/random.hpp"

namespace arblobo {

/// mean + L·z with z i.i.d. standard normal.
Vector sample_gaussian(RandomStream& stream, std::span<const double> mean, const Matrix& scale);

/// mean + L·z / sqrt(w/ν) with z standard normal and w ~ χ²(ν).
Vector sample_student_t(RandomStream& stream, double dof, std::span<const double> mean,
                        const Matrix& scale);

}  // namespace arblobo
