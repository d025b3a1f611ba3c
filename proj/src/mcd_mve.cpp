// Minimum volume ellipsoid and fast minimum covariance determinant.

#include <algorithm>
#include <cmath>
#include <limits>

#include "estimators_internal.hpp"
#include "rgqda/error.hpp"
#include "rgqda/stats.hpp"

namespace rgqda {

namespace {

struct Candidate {
  std::size_t draw = 0;  // start index; ties in the objective go to the lowest
  double log_det = std::numeric_limits<double>::infinity();
  Vector mean;
  SpdMatrix scatter;
};

bool better(const Candidate& a, const Candidate& b) {
  return a.log_det < b.log_det || (a.log_det == b.log_det && a.draw < b.draw);
}

// One C-step: keep the h rows closest to (mean, scatter) and refit on them.
std::optional<Candidate> c_step(const Matrix& data, const Candidate& from, std::size_t h) {
  const Vector d2 = from.scatter.mahalanobis_sq_rows(data, from.mean);
  const auto keep = detail::smallest_indices(d2, h);
  const Moments m = sample_moments(select_rows(data, keep));
  auto spd = detail::try_spd(m.scatter);
  if (!spd) return std::nullopt;
  Candidate next;
  next.draw = from.draw;
  next.log_det = spd->log_det();
  next.mean = m.mean;
  next.scatter = std::move(*spd);
  return next;
}

}  // namespace

LocationScatter fit_mve(const Matrix& data, const EstimatorSpec& spec, Rng& rng) {
  const auto n = static_cast<std::size_t>(data.rows());
  const auto p = static_cast<std::size_t>(data.cols());
  const std::size_t h = spec.subset_size.value_or(default_subset_size(n, p));
  const double half_p = 0.5 * static_cast<double>(p);

  bool found = false;
  double best_log_volume = std::numeric_limits<double>::infinity();
  Vector best_center;
  Matrix best_scatter;
  for (std::size_t s = 0; s < spec.n_subsamples; ++s) {
    auto start = detail::draw_start(data, rng);
    if (!start) continue;
    std::vector<double> d2(n);
    const Vector dist = start->scatter.mahalanobis_sq_rows(data, start->mean);
    std::copy(dist.data(), dist.data() + dist.size(), d2.begin());
    std::nth_element(d2.begin(), d2.begin() + static_cast<std::ptrdiff_t>(h - 1), d2.end());
    const double inflation = d2[h - 1];
    if (!(inflation > 0.0)) continue;
    // Volume of {x : (x-m)' (inflation * S)^{-1} (x-m) <= 1}, up to a constant.
    const double log_volume = 0.5 * start->scatter.log_det() + half_p * std::log(inflation);
    if (log_volume < best_log_volume) {
      best_log_volume = log_volume;
      best_center = start->mean;
      best_scatter = inflation * start->scatter.matrix();
      found = true;
    }
  }
  if (!found) throw Error(ErrorKind::DegenerateData, "MVE: no subset gave a nonsingular scatter");

  SpdMatrix scatter = detail::spd_or_degenerate(best_scatter, "MVE");
  if (spec.consistency_correction) {
    const double factor = detail::median_consistency_factor(
        scatter.mahalanobis_sq_rows(data, best_center), p);
    scatter = detail::spd_or_degenerate(factor * scatter.matrix(), "MVE");
  }
  LocationScatter out;
  out.n_used = h;
  if (spec.reweight) {
    // Mean and scatter of the points inside the 97.5% tolerance ellipsoid of
    // the raw fit, rescaled for the truncation of a Normal sample.
    const double cutoff = stats::chi2_quantile(0.975, static_cast<double>(p));
    const Vector d2 = scatter.mahalanobis_sq_rows(data, best_center);
    std::vector<double> w(n);
    std::size_t kept = 0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = d2(static_cast<Eigen::Index>(i)) <= cutoff ? 1.0 : 0.0;
      kept += w[i] > 0.0 ? 1 : 0;
    }
    if (kept > p) {
      const Moments m = weighted_moments(data, w);
      const double factor = 0.975 / stats::chi2_cdf(cutoff, static_cast<double>(p + 2));
      best_center = m.mean;
      scatter = detail::spd_or_degenerate(factor * m.scatter, "MVE");
      out.n_used = kept;
    }
  }
  out.location = std::move(best_center);
  out.scatter = std::move(scatter);
  out.estimator = EstimatorKind::MVE;
  out.raw_objective = best_log_volume;
  return out;
}

LocationScatter fit_mcd(const Matrix& data, const EstimatorSpec& spec, Rng& rng, McdTrace* trace) {
  const auto n = static_cast<std::size_t>(data.rows());
  const auto p = static_cast<std::size_t>(data.cols());
  const std::size_t h = spec.subset_size.value_or(default_subset_size(n, p));
  constexpr int kInitialSteps = 2;

  std::vector<Candidate> pool;
  pool.reserve(spec.n_subsamples);
  for (std::size_t s = 0; s < spec.n_subsamples; ++s) {
    auto start = detail::draw_start(data, rng);
    if (!start) continue;
    Candidate c;
    c.draw = s;
    c.log_det = start->scatter.log_det();
    c.mean = std::move(start->mean);
    c.scatter = std::move(start->scatter);
    bool ok = true;
    for (int step = 0; step < kInitialSteps && ok; ++step) {
      auto next = c_step(data, c, h);
      ok = next.has_value();
      if (ok) c = std::move(*next);
    }
    if (ok) pool.push_back(std::move(c));
  }
  if (pool.empty()) throw Error(ErrorKind::DegenerateData, "MCD: every h-subset scatter was singular");

  const std::size_t keep = std::min(spec.n_refine, pool.size());
  std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(keep), pool.end(), better);
  pool.resize(keep);

  // Refine to convergence. The determinant cannot increase across C-steps;
  // iteration stops as soon as it fails to decrease.
  Candidate best;
  int iterations = 0;
  bool converged = true;
  for (Candidate& c : pool) {
    std::vector<double> path{c.log_det};
    int it = 0;
    bool settled = false;
    while (it < spec.max_iterations) {
      ++it;
      auto next = c_step(data, c, h);
      if (!next || !(next->log_det < c.log_det)) {
        settled = true;
        break;
      }
      c = std::move(*next);
      path.push_back(c.log_det);
    }
    if (trace) trace->refinement_log_dets.push_back(std::move(path));
    if (better(c, best)) {
      best = c;
      iterations = it;
      converged = settled;
    }
  }

  LocationScatter out;
  out.location = best.mean;
  out.raw_objective = best.log_det;
  out.scatter = best.scatter;
  if (spec.consistency_correction) {
    const double factor =
        detail::median_consistency_factor(best.scatter.mahalanobis_sq_rows(data, best.mean), p);
    out.scatter = detail::spd_or_degenerate(factor * best.scatter.matrix(), "MCD");
  }
  out.n_used = h;
  out.estimator = EstimatorKind::MCD;
  out.iterations = iterations;
  out.converged = converged;
  return out;
}

}  // namespace rgqda
