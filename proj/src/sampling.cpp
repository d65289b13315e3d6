#include "arblobo/sampling.hpp"

#include <cmath>

#include "arblobo/errors.hpp"

namespace arblobo {
namespace {

Vector shifted(std::span<const double> mean, const Matrix& scale, std::span<const double> z,
               double factor) {
  Vector out(mean.begin(), mean.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k <= i; ++k) s += scale(i, k) * z[k];
    out[i] += factor * s;
  }
  return out;
}

void check_dims(std::span<const double> mean, const Matrix& scale) {
  if (scale.rows() != mean.size() || scale.cols() != mean.size()) {
    throw DimensionMismatch("sampler: scale is not " + std::to_string(mean.size()) + "x" +
                            std::to_string(mean.size()));
  }
}

}  // namespace

Vector sample_gaussian(RandomStream& stream, std::span<const double> mean, const Matrix& scale) {
  check_dims(mean, scale);
  Vector z(mean.size());
  for (double& v : z) v = stream.normal();
  return shifted(mean, scale, z, 1.0);
}

Vector sample_student_t(RandomStream& stream, double dof, std::span<const double> mean,
                        const Matrix& scale) {
  if (!(dof > 0.0)) throw InvalidArgument("sample_student_t: degrees of freedom must be positive");
  check_dims(mean, scale);
  Vector z(mean.size());
  for (double& v : z) v = stream.normal();
  const double w = stream.chi_square(dof);
  return shifted(mean, scale, z, 1.0 / std::sqrt(w / dof));
}

}  // namespace arblobo
