#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace arblobo {

using Vector = std::vector<double>;

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  /// Takes ownership of row-major `data`; throws DimensionMismatch on size mismatch.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  const std::vector<double>& data() const { return data_; }

  Matrix transpose() const;
  Matrix& operator*=(double s);
  bool all_finite() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, Matrix m);
Vector operator*(const Matrix& a, std::span<const double> x);

/// XᵀX.
Matrix gram(const Matrix& x);
/// Xᵀv.
Vector transpose_times(const Matrix& x, std::span<const double> v);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double frobenius_norm(const Matrix& m);
double max_abs_asymmetry(const Matrix& m);

/// Lower Cholesky factor L with L·Lᵀ = M.
/// Throws NotSymmetric, NotPositiveDefinite (pivot ≤ 1e-14·max diagonal) or NonFinite.
Matrix cholesky(const Matrix& m);
/// log det(L·Lᵀ) for a Cholesky factor L.
double log_det_from_cholesky(const Matrix& lower);
/// Solves L·x = b by forward substitution.
Vector solve_lower(const Matrix& lower, std::span<const double> b);

struct SymmetricEigen {
  Vector values;   // descending
  Matrix vectors;  // column k is the eigenvector of values[k]
};

/// Cyclic Jacobi eigensolver for symmetric matrices (intended for n ≤ 200).
SymmetricEigen sym_eigen(const Matrix& m);

}  // namespace arblobo
