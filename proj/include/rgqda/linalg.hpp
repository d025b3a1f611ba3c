#pragma once

#include <span>

#include <Eigen/Core>

namespace rgqda {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;  // observations are rows

/// Pivots at or below this fraction of the largest diagonal entry are treated
/// as zero by the Cholesky factorization.
inline constexpr double kPdRelativeTolerance = 1e-10;

/// Symmetric positive-definite matrix stored together with its lower Cholesky
/// factor and log-determinant. Immutable once constructed.
class SpdMatrix {
 public:
  SpdMatrix() = default;

  /// Factorizes `m`. Throws Error{NotPositiveDefinite} when a pivot falls
  /// below the relative tolerance, Error{InvalidArgument} when `m` is not
  /// square or not symmetric to 1e-12 relative.
  explicit SpdMatrix(const Matrix& m);

  /// Factorizes m + eps * trace(m)/p * I.
  static SpdMatrix with_ridge(const Matrix& m, double eps);

  Eigen::Index dim() const noexcept { return matrix_.rows(); }
  const Matrix& matrix() const noexcept { return matrix_; }
  const Matrix& chol() const noexcept { return chol_; }
  double log_det() const noexcept { return log_det_; }

  /// diff' * inverse(m) * diff via one triangular solve.
  double mahalanobis_sq(const Vector& diff) const;

  /// Squared distance of every row of `rows` to `center`.
  Vector mahalanobis_sq_rows(const Matrix& rows, const Vector& center) const;

  Vector solve(const Vector& rhs) const;

 private:
  Matrix matrix_;
  Matrix chol_;
  double log_det_ = 0.0;
};

SpdMatrix cholesky(const Matrix& m);

/// (x - center)' scatter^{-1} (x - center). Throws Error{DimensionMismatch}.
double mahalanobis_sq(const Vector& x, const Vector& center, const SpdMatrix& scatter);

/// Column means and the divisor-n scatter of the rows of `data`.
struct Moments {
  Vector mean;
  Matrix scatter;
};

Moments sample_moments(const Matrix& data);

/// Weighted mean and weighted scatter, both normalized by the weight sum.
Moments weighted_moments(const Matrix& data, std::span<const double> weights);

/// Copies the listed rows into a new matrix.
Matrix select_rows(const Matrix& data, std::span<const std::size_t> rows);

}  // namespace rgqda
