#include "rgqda/linalg.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "rgqda/error.hpp"

namespace rgqda {

SpdMatrix::SpdMatrix(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::InvalidArgument, "cholesky: matrix must be square and non-empty");
  }
  const Eigen::Index p = m.rows();
  const double scale = m.cwiseAbs().maxCoeff();
  if (!std::isfinite(scale)) {
    throw Error(ErrorKind::NotPositiveDefinite, "cholesky: non-finite entries");
  }
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(ErrorKind::InvalidArgument, "cholesky: matrix is not symmetric");
  }

  const double tol = kPdRelativeTolerance * m.diagonal().maxCoeff();
  chol_ = Matrix::Zero(p, p);
  log_det_ = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    double pivot = m(j, j);
    for (Eigen::Index k = 0; k < j; ++k) pivot -= chol_(j, k) * chol_(j, k);
    if (!(pivot > tol)) {
      throw Error(ErrorKind::NotPositiveDefinite,
                  "cholesky: pivot " + std::to_string(j) + " is not positive");
    }
    const double d = std::sqrt(pivot);
    chol_(j, j) = d;
    log_det_ += std::log(d);
    for (Eigen::Index i = j + 1; i < p; ++i) {
      double v = m(i, j);
      for (Eigen::Index k = 0; k < j; ++k) v -= chol_(i, k) * chol_(j, k);
      chol_(i, j) = v / d;
    }
  }
  log_det_ *= 2.0;
  // Keep the exact symmetric matrix the factor describes (lower triangle wins).
  matrix_ = m.selfadjointView<Eigen::Lower>();
}

SpdMatrix SpdMatrix::with_ridge(const Matrix& m, double eps) {
  const double p = static_cast<double>(m.rows());
  Matrix ridged = m;
  ridged.diagonal().array() += eps * m.trace() / p;
  return SpdMatrix(ridged);
}

double SpdMatrix::mahalanobis_sq(const Vector& diff) const {
  if (diff.size() != dim()) {
    throw Error(ErrorKind::DimensionMismatch, "mahalanobis_sq: dimension mismatch");
  }
  return chol_.triangularView<Eigen::Lower>().solve(diff).squaredNorm();
}

Vector SpdMatrix::mahalanobis_sq_rows(const Matrix& rows, const Vector& center) const {
  if (rows.cols() != dim() || center.size() != dim()) {
    throw Error(ErrorKind::DimensionMismatch, "mahalanobis_sq_rows: dimension mismatch");
  }
  Matrix centered = (rows.rowwise() - center.transpose()).transpose();
  chol_.triangularView<Eigen::Lower>().solveInPlace(centered);
  return centered.colwise().squaredNorm().transpose();
}

Vector SpdMatrix::solve(const Vector& rhs) const {
  Vector y = chol_.triangularView<Eigen::Lower>().solve(rhs);
  return chol_.transpose().triangularView<Eigen::Upper>().solve(y);
}

SpdMatrix cholesky(const Matrix& m) { return SpdMatrix(m); }

double mahalanobis_sq(const Vector& x, const Vector& center, const SpdMatrix& scatter) {
  if (x.size() != center.size() || x.size() != scatter.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "mahalanobis_sq: dimension mismatch");
  }
  return scatter.mahalanobis_sq(x - center);
}

Moments sample_moments(const Matrix& data) {
  const double n = static_cast<double>(data.rows());
  Moments out;
  out.mean = data.colwise().mean().transpose();
  const Matrix centered = data.rowwise() - out.mean.transpose();
  Matrix s = Matrix::Zero(data.cols(), data.cols());
  s.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose(), 1.0 / n);
  out.scatter = s.selfadjointView<Eigen::Lower>();
  return out;
}

Moments weighted_moments(const Matrix& data, std::span<const double> weights) {
  if (static_cast<Eigen::Index>(weights.size()) != data.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "weighted_moments: weight count mismatch");
  }
  const Eigen::Map<const Vector> w(weights.data(), static_cast<Eigen::Index>(weights.size()));
  const double total = w.sum();
  if (!(total > 0.0)) throw Error(ErrorKind::DegenerateData, "weighted_moments: zero total weight");
  Moments out;
  out.mean = (data.transpose() * w) / total;
  const Matrix centered = data.rowwise() - out.mean.transpose();
  const Matrix scaled = centered.array().colwise() * w.array().sqrt();
  Matrix s = Matrix::Zero(data.cols(), data.cols());
  s.selfadjointView<Eigen::Lower>().rankUpdate(scaled.transpose(), 1.0 / total);
  out.scatter = s.selfadjointView<Eigen::Lower>();
  return out;
}

Matrix select_rows(const Matrix& data, std::span<const std::size_t> rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), data.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = data.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

}  // namespace rgqda
