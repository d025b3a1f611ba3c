// S-estimator of location and scatter with Tukey's biweight rho, computed by
// random-start iteratively reweighted steps (fast-S).

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "estimators_internal.hpp"
#include "rgqda/error.hpp"
#include "rgqda/stats.hpp"

namespace rgqda {

namespace {

// M-scale: sigma with mean rho(d_i / sigma) = delta. The left side decreases
// in sigma, so a bracket plus TOMS748 pins it to full precision.
double m_scale(const std::vector<double>& dist, double b, double delta) {
  auto f = [&](double log_sigma) {
    const double inv = std::exp(-log_sigma);
    double sum = 0.0;
    for (double d : dist) sum += stats::tukey_rho(d * inv, b);
    return sum / static_cast<double>(dist.size()) - delta;
  };
  std::vector<double> copy = dist;
  const double med = stats::median_inplace(copy);
  if (!(med > 0.0)) return 0.0;
  double lo = std::log(med / b);
  double hi = lo + 1.0;
  while (f(hi) > 0.0) hi += 1.0;
  while (f(lo) < 0.0) lo -= 1.0;
  boost::uintmax_t max_iter = 100;
  const auto r = boost::math::tools::toms748_solve(
      f, lo, hi, boost::math::tools::eps_tolerance<double>(50), max_iter);
  return std::exp(0.5 * (r.first + r.second));
}

struct SState {
  std::size_t draw = 0;
  Vector location;
  SpdMatrix shape;  // unit determinant
  double scale = std::numeric_limits<double>::infinity();
};

bool better(const SState& a, const SState& b) {
  return a.scale < b.scale || (a.scale == b.scale && a.draw < b.draw);
}

std::vector<double> distances(const Matrix& data, const Vector& location, const SpdMatrix& shape) {
  const Vector d2 = shape.mahalanobis_sq_rows(data, location);
  std::vector<double> d(static_cast<std::size_t>(d2.size()));
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::sqrt(d2(static_cast<Eigen::Index>(i)));
  return d;
}

std::optional<SpdMatrix> unit_shape(const Matrix& scatter) {
  auto spd = detail::try_spd(scatter);
  if (!spd) return std::nullopt;
  const double p = static_cast<double>(scatter.rows());
  return detail::try_spd(scatter * std::exp(-spd->log_det() / p));
}

// One reweighting step from `s`; nullopt when the weighted scatter degenerates.
std::optional<SState> i_step(const Matrix& data, const SState& s, double b, double delta) {
  const std::vector<double> d = distances(data, s.location, s.shape);
  std::vector<double> w(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) w[i] = stats::tukey_weight(d[i] / s.scale, b);
  Moments m;
  try {
    m = weighted_moments(data, w);
  } catch (const Error&) {
    return std::nullopt;
  }
  auto shape = unit_shape(m.scatter);
  if (!shape) return std::nullopt;
  SState next;
  next.draw = s.draw;
  next.location = std::move(m.mean);
  next.shape = std::move(*shape);
  next.scale = m_scale(distances(data, next.location, next.shape), b, delta);
  if (!(next.scale > 0.0)) return std::nullopt;
  return next;
}

}  // namespace

LocationScatter fit_s_tukey(const Matrix& data, const EstimatorSpec& spec, Rng& rng) {
  const auto p = static_cast<std::size_t>(data.cols());
  const double delta = spec.breakdown;
  const double b = stats::tukey_constant(static_cast<int>(p), delta);
  constexpr int kInitialSteps = 2;

  std::vector<SState> pool;
  pool.reserve(spec.n_subsamples);
  for (std::size_t s = 0; s < spec.n_subsamples; ++s) {
    auto start = detail::draw_start(data, rng);
    if (!start) continue;
    auto shape = unit_shape(start->scatter.matrix());
    if (!shape) continue;
    SState st;
    st.draw = s;
    st.location = std::move(start->mean);
    st.shape = std::move(*shape);
    st.scale = m_scale(distances(data, st.location, st.shape), b, delta);
    if (!(st.scale > 0.0)) continue;
    bool ok = true;
    for (int step = 0; step < kInitialSteps && ok; ++step) {
      auto next = i_step(data, st, b, delta);
      ok = next.has_value();
      if (ok) st = std::move(*next);
    }
    if (ok) pool.push_back(std::move(st));
  }
  if (pool.empty()) throw Error(ErrorKind::DegenerateData, "S-estimator: no usable random start");

  const std::size_t keep = std::min(spec.n_refine, pool.size());
  std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(keep), pool.end(), better);
  pool.resize(keep);

  SState best;
  int iterations = 0;
  bool converged = true;
  for (SState& st : pool) {
    int it = 0;
    bool settled = false;
    while (it < spec.max_iterations) {
      ++it;
      auto next = i_step(data, st, b, delta);
      if (!next || !(next->scale < st.scale)) {
        settled = true;
        break;
      }
      const double rel = (st.scale - next->scale) / st.scale;
      st = std::move(*next);
      if (rel <= spec.tolerance) {
        settled = true;
        break;
      }
    }
    if (better(st, best)) {
      best = st;
      iterations = it;
      converged = settled;
    }
  }

  LocationScatter out;
  out.location = best.location;
  out.scatter = detail::spd_or_degenerate(best.scale * best.scale * best.shape.matrix(), "S-estimator");
  out.n_used = static_cast<std::size_t>(data.rows());
  out.estimator = EstimatorKind::STukey;
  out.raw_objective = std::log(best.scale);
  out.iterations = iterations;
  out.converged = converged;
  return out;
}

double s_constraint_residual(const Matrix& data, const LocationScatter& fit, double breakdown) {
  const double b = stats::tukey_constant(static_cast<int>(data.cols()), breakdown);
  const Vector d2 = fit.scatter.mahalanobis_sq_rows(data, fit.location);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < d2.size(); ++i) sum += stats::tukey_rho(std::sqrt(d2(i)), b);
  return sum / static_cast<double>(d2.size()) - breakdown;
}

}  // namespace rgqda
