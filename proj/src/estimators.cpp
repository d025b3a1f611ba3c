#include "rgqda/estimators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <string>

#include "estimators_internal.hpp"
#include "rgqda/error.hpp"
#include "rgqda/stats.hpp"

namespace rgqda {

std::string_view estimator_label(EstimatorKind kind) noexcept {
  switch (kind) {
    case EstimatorKind::Classical: return "GQDA";
    case EstimatorKind::Winsorized: return "W";
    case EstimatorKind::MVE: return "MVE";
    case EstimatorKind::MCD: return "MCD";
    case EstimatorKind::MHuber: return "M";
    case EstimatorKind::STukey: return "S";
    case EstimatorKind::SD: return "SD";
  }
  return "?";
}

EstimatorKind parse_estimator(std::string_view name) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (key == "gqda" || key == "classical") return EstimatorKind::Classical;
  if (key == "w" || key == "winsorized" || key == "winsor") return EstimatorKind::Winsorized;
  if (key == "mve") return EstimatorKind::MVE;
  if (key == "mcd") return EstimatorKind::MCD;
  if (key == "m" || key == "huber" || key == "m-huber") return EstimatorKind::MHuber;
  if (key == "s" || key == "tukey" || key == "s-tukey") return EstimatorKind::STukey;
  if (key == "sd" || key == "stahel-donoho") return EstimatorKind::SD;
  throw Error(ErrorKind::InvalidArgument, "unknown estimator '" + std::string(name) + "'");
}

bool is_stochastic(EstimatorKind kind) noexcept {
  return kind == EstimatorKind::MVE || kind == EstimatorKind::MCD ||
         kind == EstimatorKind::STukey || kind == EstimatorKind::SD;
}

std::size_t default_subset_size(std::size_t n, std::size_t p) noexcept { return (n + p + 1) / 2; }

double default_huber_k(std::size_t p) {
  return std::sqrt(stats::chi2_quantile(0.95, static_cast<double>(p)));
}

void validate(const EstimatorSpec& spec, std::size_t n, std::size_t p) {
  if (p == 0) throw Error(ErrorKind::InvalidArgument, "data has no feature columns");
  if (n <= p + 1) {
    throw Error(ErrorKind::TooFewObservations,
                "need more than p+1 = " + std::to_string(p + 1) + " observations, got " +
                    std::to_string(n));
  }
  auto fraction_ok = [](double f) { return f > 0.0 && f < 0.5; };
  if (spec.max_iterations < 1) throw Error(ErrorKind::InvalidArgument, "max_iterations must be >= 1");
  if (!(spec.tolerance > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  switch (spec.kind) {
    case EstimatorKind::Winsorized:
      if (!fraction_ok(spec.winsor_fraction)) {
        throw Error(ErrorKind::InvalidArgument, "winsor_fraction must lie in (0, 0.5)");
      }
      break;
    case EstimatorKind::MVE:
    case EstimatorKind::MCD:
      if (spec.subset_size) {
        const std::size_t h = *spec.subset_size;
        if (h < default_subset_size(n, p) || h > n) {
          throw Error(ErrorKind::InvalidArgument,
                      "subset_size must lie in [floor((n+p+1)/2), n]");
        }
      }
      if (spec.n_subsamples < 1) throw Error(ErrorKind::InvalidArgument, "n_subsamples must be >= 1");
      break;
    case EstimatorKind::MHuber:
      if (spec.huber_k && !(*spec.huber_k > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "huber_k must be positive");
      }
      break;
    case EstimatorKind::STukey:
      if (!(spec.breakdown > 0.0 && spec.breakdown <= 0.5)) {
        throw Error(ErrorKind::InvalidArgument, "breakdown must lie in (0, 0.5]");
      }
      if (spec.n_subsamples < 1) throw Error(ErrorKind::InvalidArgument, "n_subsamples must be >= 1");
      break;
    case EstimatorKind::SD:
      if (!fraction_ok(spec.trim_fraction)) {
        throw Error(ErrorKind::InvalidArgument, "trim_fraction must lie in (0, 0.5)");
      }
      if (spec.n_directions && *spec.n_directions < 1) {
        throw Error(ErrorKind::InvalidArgument, "n_directions must be >= 1");
      }
      break;
    case EstimatorKind::Classical:
      break;
  }
}

LocationScatter fit(const Matrix& data, const EstimatorSpec& spec, Rng& rng) {
  if (!data.allFinite()) throw Error(ErrorKind::InvalidArgument, "data contains non-finite entries");
  validate(spec, static_cast<std::size_t>(data.rows()), static_cast<std::size_t>(data.cols()));
  switch (spec.kind) {
    case EstimatorKind::Classical: return fit_classical(data, spec.unbiased);
    case EstimatorKind::Winsorized: return fit_winsorized(data, spec.winsor_fraction);
    case EstimatorKind::MVE: return fit_mve(data, spec, rng);
    case EstimatorKind::MCD: return fit_mcd(data, spec, rng);
    case EstimatorKind::MHuber: return fit_m_huber(data, spec);
    case EstimatorKind::STukey: return fit_s_tukey(data, spec, rng);
    case EstimatorKind::SD: return fit_sd(data, spec, rng);
  }
  throw Error(ErrorKind::InvalidArgument, "unhandled estimator kind");
}

LocationScatter fit_classical(const Matrix& data, bool unbiased) {
  if (data.rows() < 2) throw Error(ErrorKind::TooFewObservations, "classical fit needs two rows");
  Moments m = sample_moments(data);
  if (unbiased) {
    const double n = static_cast<double>(data.rows());
    m.scatter *= n / (n - 1.0);
  }
  LocationScatter out;
  out.location = std::move(m.mean);
  out.scatter = detail::spd_or_degenerate(m.scatter, "classical");
  out.n_used = static_cast<std::size_t>(data.rows());
  out.estimator = EstimatorKind::Classical;
  return out;
}

Matrix winsorize(const Matrix& data, double fraction) {
  const auto n = static_cast<std::size_t>(data.rows());
  const auto k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
  Matrix out = data;
  if (k == 0) return out;
  if (2 * k >= n) throw Error(ErrorKind::InvalidArgument, "winsorization would remove every value");
  std::vector<double> column(n);
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    for (std::size_t i = 0; i < n; ++i) column[i] = data(static_cast<Eigen::Index>(i), j);
    std::sort(column.begin(), column.end());
    const double lo = column[k];
    const double hi = column[n - 1 - k];
    out.col(j) = out.col(j).cwiseMax(lo).cwiseMin(hi);
  }
  return out;
}

LocationScatter fit_winsorized(const Matrix& data, double fraction) {
  LocationScatter out = fit_classical(winsorize(data, fraction));
  out.estimator = EstimatorKind::Winsorized;
  return out;
}

namespace detail {

std::optional<SpdMatrix> try_spd(const Matrix& m) {
  try {
    return SpdMatrix(m);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotPositiveDefinite) return std::nullopt;
    throw;
  }
}

SpdMatrix spd_or_degenerate(const Matrix& m, const char* who) {
  auto spd = try_spd(m);
  if (!spd) throw Error(ErrorKind::DegenerateData, std::string(who) + ": scatter estimate is singular");
  return std::move(*spd);
}

std::optional<SubsetStart> draw_start(const Matrix& data, Rng& rng) {
  const auto n = static_cast<std::size_t>(data.rows());
  const auto p = static_cast<std::size_t>(data.cols());
  SubsetStart start;
  start.rows = draw_distinct(rng, n, p + 1);
  while (true) {
    const Moments m = sample_moments(select_rows(data, start.rows));
    if (auto spd = try_spd(m.scatter)) {
      start.mean = m.mean;
      start.scatter = std::move(*spd);
      return start;
    }
    if (start.rows.size() >= n) return std::nullopt;
    // Grow the subset by one unused row.
    std::vector<std::size_t> unused;
    unused.reserve(n - start.rows.size());
    std::vector<bool> taken(n, false);
    for (std::size_t r : start.rows) taken[r] = true;
    for (std::size_t r = 0; r < n; ++r) {
      if (!taken[r]) unused.push_back(r);
    }
    start.rows.push_back(unused[draw_distinct(rng, unused.size(), 1).front()]);
  }
}

std::vector<std::size_t> smallest_indices(const Vector& values, std::size_t h) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(values.size()));
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  auto less = [&](std::size_t a, std::size_t b) {
    const double va = values(static_cast<Eigen::Index>(a));
    const double vb = values(static_cast<Eigen::Index>(b));
    return va < vb || (va == vb && a < b);
  };
  if (h < idx.size()) {
    std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(h), idx.end(), less);
    idx.resize(h);
  }
  std::sort(idx.begin(), idx.end());
  return idx;
}

double median_consistency_factor(const Vector& dist_sq, std::size_t p) {
  std::vector<double> d(dist_sq.data(), dist_sq.data() + dist_sq.size());
  return stats::median_inplace(d) / stats::chi2_quantile(0.5, static_cast<double>(p));
}

}  // namespace detail
}  // namespace rgqda
