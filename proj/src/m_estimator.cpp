// Huber-type M-estimator of multivariate location and scatter, solved by
// fixed-point iteration of the two weighted estimating equations.

#include <cmath>
#include <vector>

#include "estimators_internal.hpp"
#include "rgqda/error.hpp"
#include "rgqda/stats.hpp"

namespace rgqda {

namespace {

struct HuberWeights {
  double k;
  double k2;
  double beta;  // E[min(|Z|^2, k^2)] / p, so the scatter is consistent at N_p

  double location(double d2) const { return d2 <= k2 ? 1.0 : k / std::sqrt(d2); }
  double scatter(double d2) const { return (d2 <= k2 ? 1.0 : k2 / d2) / beta; }
};

HuberWeights make_weights(double k, std::size_t p) {
  return {k, k * k, stats::huber_truncated_mean(k, static_cast<int>(p)) / static_cast<double>(p)};
}

}  // namespace

LocationScatter fit_m_huber(const Matrix& data, const EstimatorSpec& spec) {
  const auto n = static_cast<std::size_t>(data.rows());
  const auto p = static_cast<std::size_t>(data.cols());
  const double k = spec.huber_k.value_or(default_huber_k(p));
  const HuberWeights w = make_weights(k, p);

  // Start from coordinate-wise median and MAD; fall back to the sample
  // variance for columns whose MAD vanishes.
  Vector location(static_cast<Eigen::Index>(p));
  Matrix scatter = Matrix::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  {
    const Moments classical = sample_moments(data);
    std::vector<double> column(n);
    for (std::size_t j = 0; j < p; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      for (std::size_t i = 0; i < n; ++i) column[i] = data(static_cast<Eigen::Index>(i), jj);
      const double med = stats::median_inplace(column);
      const double mad = stats::mad_inplace(column, med);
      location(jj) = med;
      scatter(jj, jj) = mad > 0.0 ? mad * mad : classical.scatter(jj, jj);
    }
  }
  SpdMatrix current = detail::spd_or_degenerate(scatter, "M-estimator");

  std::vector<double> w1(n);
  std::vector<double> w2(n);
  int it = 0;
  bool converged = false;
  while (it < spec.max_iterations) {
    ++it;
    const Vector d2 = current.mahalanobis_sq_rows(data, location);
    for (std::size_t i = 0; i < n; ++i) {
      w1[i] = w.location(d2(static_cast<Eigen::Index>(i)));
      w2[i] = w.scatter(d2(static_cast<Eigen::Index>(i)));
    }
    const Vector next_location = weighted_moments(data, w1).mean;
    const Matrix centered = data.rowwise() - next_location.transpose();
    const Eigen::Map<const Vector> w2v(w2.data(), static_cast<Eigen::Index>(n));
    const Matrix scaled = centered.array().colwise() * w2v.array().sqrt();
    Matrix next = Matrix::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
    next.selfadjointView<Eigen::Lower>().rankUpdate(scaled.transpose(), 1.0 / static_cast<double>(n));
    Matrix next_scatter = next.selfadjointView<Eigen::Lower>();

    const double scale = std::sqrt(current.matrix().trace() / static_cast<double>(p));
    const double loc_change = (next_location - location).norm();
    const double scatter_change = (next_scatter - current.matrix()).norm();
    location = next_location;
    current = detail::spd_or_degenerate(next_scatter, "M-estimator");
    if (loc_change <= spec.tolerance * scale &&
        scatter_change <= spec.tolerance * current.matrix().norm()) {
      converged = true;
      break;
    }
  }

  LocationScatter out;
  out.location = std::move(location);
  out.scatter = std::move(current);
  out.n_used = n;
  out.estimator = EstimatorKind::MHuber;
  out.iterations = it;
  out.converged = converged;
  return out;
}

MEquationResiduals m_huber_residuals(const Matrix& data, const LocationScatter& fit, double k) {
  const auto n = static_cast<std::size_t>(data.rows());
  const auto p = static_cast<std::size_t>(data.cols());
  const HuberWeights w = make_weights(k, p);
  const Vector d2 = fit.scatter.mahalanobis_sq_rows(data, fit.location);
  Vector loc_sum = Vector::Zero(static_cast<Eigen::Index>(p));
  Matrix scat_sum = Matrix::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const Vector r = data.row(ii).transpose() - fit.location;
    loc_sum += w.location(d2(ii)) * r;
    scat_sum += w.scatter(d2(ii)) * r * r.transpose();
  }
  loc_sum /= static_cast<double>(n);
  scat_sum /= static_cast<double>(n);
  const auto L = fit.scatter.chol().triangularView<Eigen::Lower>();
  MEquationResiduals out;
  out.location = L.solve(loc_sum).norm();
  Matrix half = L.solve(scat_sum);
  Matrix whitened = L.solve(half.transpose());
  out.scatter = (whitened - Matrix::Identity(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p))).norm();
  return out;
}

}  // namespace rgqda
