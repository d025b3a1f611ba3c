// Stahel-Donoho estimator: projection outlyingness with median/MAD, hard
// 0/1 weights, weighted mean and scatter.

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/QR>

#include "estimators_internal.hpp"
#include "rgqda/error.hpp"
#include "rgqda/stats.hpp"

namespace rgqda {

namespace {

// Unit normal of the hyperplane through the given rows, or nullopt when the
// rows are affinely dependent.
std::optional<Vector> hyperplane_normal(const Matrix& data, const std::vector<std::size_t>& rows) {
  const Eigen::Index p = data.cols();
  Matrix spans(p, p - 1);
  const auto base = static_cast<Eigen::Index>(rows.front());
  for (Eigen::Index k = 1; k < p; ++k) {
    spans.col(k - 1) = (data.row(static_cast<Eigen::Index>(rows[static_cast<std::size_t>(k)])) -
                        data.row(base)).transpose();
  }
  Eigen::HouseholderQR<Matrix> qr(spans);
  const Matrix r = qr.matrixQR().topRows(p - 1).triangularView<Eigen::Upper>();
  const double scale = spans.cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < p - 1; ++k) {
    if (!(std::abs(r(k, k)) > 1e-12 * scale)) return std::nullopt;
  }
  Vector normal = qr.householderQ() * Vector::Unit(p, p - 1);
  return normal;
}

}  // namespace

Vector sd_outlyingness(const Matrix& data, std::size_t n_directions, Rng& rng) {
  const auto n = static_cast<std::size_t>(data.rows());
  const Eigen::Index p = data.cols();
  Vector outlyingness = Vector::Zero(static_cast<Eigen::Index>(n));
  std::vector<double> proj(n);
  std::vector<double> scratch(n);
  std::size_t usable = 0;

  // In one dimension every direction is +-1, which give identical values.
  const std::size_t count = p == 1 ? 1 : n_directions;
  for (std::size_t k = 0; k < count; ++k) {
    Vector u = Vector::Ones(1);
    if (p > 1) {
      auto normal = hyperplane_normal(data, draw_distinct(rng, n, static_cast<std::size_t>(p)));
      if (!normal) continue;
      u = std::move(*normal);
    }
    const Vector z = data * u;
    std::copy(z.data(), z.data() + z.size(), proj.begin());
    scratch = proj;
    const double med = stats::median_inplace(scratch);
    scratch = proj;
    const double mad = stats::mad_inplace(scratch, med);
    const double spread = z.cwiseAbs().maxCoeff();
    if (!(mad > 1e-14 * spread)) continue;
    ++usable;
    for (std::size_t i = 0; i < n; ++i) {
      const double o = std::abs(proj[i] - med) / mad;
      if (o > outlyingness(static_cast<Eigen::Index>(i))) outlyingness(static_cast<Eigen::Index>(i)) = o;
    }
  }
  if (usable == 0) throw Error(ErrorKind::DegenerateData, "SD: every projection has zero MAD");
  return outlyingness;
}

LocationScatter fit_sd(const Matrix& data, const EstimatorSpec& spec, Rng& rng) {
  const auto p = static_cast<std::size_t>(data.cols());
  const std::size_t directions = spec.n_directions.value_or(std::max<std::size_t>(1000, 200 * p));
  const Vector outlyingness = sd_outlyingness(data, directions, rng);

  // Zero weight beyond the (1 - trim) quantile of the outlyingness
  // distribution at the Normal model, where outlyingness^2 ~ chi2_p.
  const double cutoff = std::sqrt(stats::chi2_quantile(1.0 - spec.trim_fraction, static_cast<double>(p)));
  std::vector<double> w(static_cast<std::size_t>(data.rows()));
  std::size_t used = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = outlyingness(static_cast<Eigen::Index>(i)) <= cutoff ? 1.0 : 0.0;
    used += w[i] > 0.0 ? 1 : 0;
  }
  if (used <= p) throw Error(ErrorKind::DegenerateData, "SD: too few observations kept");
  const Moments m = used == w.size() ? sample_moments(data) : weighted_moments(data, w);
  LocationScatter out;
  out.location = m.mean;
  out.scatter = detail::spd_or_degenerate(m.scatter, "SD");
  out.n_used = used;
  out.estimator = EstimatorKind::SD;
  return out;
}

}  // namespace rgqda
