#include "rgqda/gqda.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "rgqda/error.hpp"

namespace rgqda {

namespace {

void check_index(std::size_t i, std::size_t g) {
  if (i >= g) throw Error(ErrorKind::InvalidArgument, "class index out of range");
}

// Candidate c beats `incumbent` on fewer errors, then on distance to 1, then
// on being smaller.
bool preferred(double c, std::size_t errors, double incumbent, std::size_t incumbent_errors) {
  if (errors != incumbent_errors) return errors < incumbent_errors;
  const double dc = std::abs(c - 1.0);
  const double di = std::abs(incumbent - 1.0);
  if (dc != di) return dc < di;
  return c < incumbent;
}

double clamp_unit(double c) { return std::clamp(c, 0.0, 1.0); }

}  // namespace

GqdaModel::GqdaModel(std::vector<std::string> classes, std::vector<LocationScatter> fits,
                     double c_star, EstimatorSpec estimator)
    : classes_(std::move(classes)),
      fits_(std::move(fits)),
      c_star_(c_star),
      estimator_(estimator) {
  if (classes_.size() < 2) throw Error(ErrorKind::InvalidArgument, "a GQDA model needs at least two classes");
  if (fits_.size() != classes_.size()) {
    throw Error(ErrorKind::InvalidArgument, "one fit per class is required");
  }
  if (!(c_star_ >= 0.0 && c_star_ <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "c* must lie in [0, 1]");
  }
  const auto p = fits_.front().location.size();
  for (const auto& f : fits_) {
    if (f.location.size() != p || f.scatter.dim() != p) {
      throw Error(ErrorKind::DimensionMismatch, "class fits disagree on dimension");
    }
  }
  const std::size_t g = classes_.size();
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = i + 1; j < g; ++j) {
      const double d = fits_[i].scatter.log_det() - fits_[j].scatter.log_det();
      PairStatistic s;
      s.first = d >= 0.0 ? i : j;
      s.second = d >= 0.0 ? j : i;
      s.sigma_d = std::abs(d);
      s.degenerate = s.sigma_d < kSigmaTolerance;
      pairs_.push_back(s);
    }
  }
}

GqdaModel GqdaModel::with_threshold(double c) const {
  return GqdaModel(classes_, fits_, c, estimator_);
}

double signed_sigma_d(std::span<const LocationScatter> fits, std::size_t i, std::size_t j) {
  check_index(i, fits.size());
  check_index(j, fits.size());
  const double d = fits[i].scatter.log_det() - fits[j].scatter.log_det();
  return std::abs(d) < kSigmaTolerance ? 0.0 : d;
}

double delta_sq(const Vector& x, std::size_t i, std::size_t j, const GqdaModel& model) {
  check_index(i, model.num_classes());
  check_index(j, model.num_classes());
  const auto& fi = model.fits()[i];
  const auto& fj = model.fits()[j];
  return mahalanobis_sq(x, fj.location, fj.scatter) - mahalanobis_sq(x, fi.location, fi.scatter);
}

PairStatistic sigma_d(std::size_t i, std::size_t j, const GqdaModel& model) {
  check_index(i, model.num_classes());
  check_index(j, model.num_classes());
  const double d = model.fits()[i].scatter.log_det() - model.fits()[j].scatter.log_det();
  PairStatistic s;
  s.first = d >= 0.0 ? i : j;
  s.second = d >= 0.0 ? j : i;
  s.sigma_d = std::abs(d);
  s.degenerate = s.sigma_d < kSigmaTolerance;
  return s;
}

Matrix class_distances(const Matrix& rows, std::span<const LocationScatter> fits) {
  Matrix out(rows.rows(), static_cast<Eigen::Index>(fits.size()));
  for (std::size_t k = 0; k < fits.size(); ++k) {
    out.col(static_cast<Eigen::Index>(k)) = fits[k].scatter.mahalanobis_sq_rows(rows, fits[k].location);
  }
  return out;
}

namespace {

// Margins for one row of precomputed distances.
template <typename Row>
void row_margins(const Row& d2, std::span<const double> log_dets, double c, Vector& out) {
  const auto g = static_cast<Eigen::Index>(log_dets.size());
  for (Eigen::Index i = 0; i < g; ++i) {
    double m = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < g; ++j) {
      if (j == i) continue;
      double s = log_dets[static_cast<std::size_t>(i)] - log_dets[static_cast<std::size_t>(j)];
      if (std::abs(s) < kSigmaTolerance) s = 0.0;
      m = std::min(m, (d2(j) - d2(i)) - c * s);
    }
    out(i) = m;
  }
}

std::vector<double> log_dets_of(std::span<const LocationScatter> fits) {
  std::vector<double> out;
  out.reserve(fits.size());
  for (const auto& f : fits) out.push_back(f.scatter.log_det());
  return out;
}

std::size_t argmax_lowest(const Vector& m) {
  std::size_t best = 0;
  for (Eigen::Index i = 1; i < m.size(); ++i) {
    if (m(i) > m(static_cast<Eigen::Index>(best))) best = static_cast<std::size_t>(i);
  }
  return best;
}

}  // namespace

Vector margins(const Vector& x, const GqdaModel& model) {
  if (static_cast<std::size_t>(x.size()) != model.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "observation dimension does not match the model");
  }
  const auto& fits = model.fits();
  Vector d2(static_cast<Eigen::Index>(fits.size()));
  for (std::size_t k = 0; k < fits.size(); ++k) {
    d2(static_cast<Eigen::Index>(k)) = mahalanobis_sq(x, fits[k].location, fits[k].scatter);
  }
  const auto ld = log_dets_of(fits);
  Vector out(d2.size());
  row_margins(d2, ld, model.c_star(), out);
  return out;
}

std::size_t classify(const Vector& x, const GqdaModel& model) {
  return argmax_lowest(margins(x, model));
}

std::vector<std::size_t> classify_rows(const Matrix& rows, const GqdaModel& model) {
  if (static_cast<std::size_t>(rows.cols()) != model.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "data dimension does not match the model");
  }
  const Matrix d2 = class_distances(rows, model.fits());
  const auto ld = log_dets_of(model.fits());
  std::vector<std::size_t> out(static_cast<std::size_t>(rows.rows()));
  Vector m(d2.cols());
  for (Eigen::Index r = 0; r < d2.rows(); ++r) {
    row_margins(d2.row(r), ld, model.c_star(), m);
    out[static_cast<std::size_t>(r)] = argmax_lowest(m);
  }
  return out;
}

double misclassification_error(const GqdaModel& model, const LabeledDataset& data) {
  if (data.size() == 0) throw Error(ErrorKind::EmptyDataset, "misclassification_error: empty dataset");
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < model.num_classes(); ++k) index.emplace(model.classes()[k], k);
  std::vector<std::size_t> truth(data.size(), model.num_classes());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto it = index.find(data.class_table.at(data.labels[i]));
    if (it != index.end()) truth[i] = it->second;
  }
  const auto predicted = classify_rows(data.features, model);
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) wrong += predicted[i] != truth[i] ? 1 : 0;
  return static_cast<double>(wrong) / static_cast<double>(data.size());
}

ThresholdSelection select_c_from_ratios(std::span<const double> upper, std::span<const double> lower) {
  if (upper.empty() || lower.empty()) {
    throw Error(ErrorKind::EmptyDataset, "threshold selection needs points from both classes");
  }
  std::vector<double> r1(upper.begin(), upper.end());
  std::vector<double> r2(lower.begin(), lower.end());
  std::sort(r1.begin(), r1.end());
  std::sort(r2.begin(), r2.end());
  // Errors at c: upper points with ratio < c plus lower points with ratio >= c.
  auto errors_at = [&](double c) {
    const auto up = static_cast<std::size_t>(std::lower_bound(r1.begin(), r1.end(), c) - r1.begin());
    const auto lo = static_cast<std::size_t>(r2.end() - std::lower_bound(r2.begin(), r2.end(), c));
    return up + lo;
  };

  ThresholdSelection out;
  const double r1_min = r1.front();
  const double r2_max = r2.back();
  if (r2_max < r1_min) {
    // Any point of the gap separates the training ratios; take its midpoint.
    out.disjoint = true;
    out.best_candidate = 0.5 * (r2_max + r1_min);
    out.candidates = {out.best_candidate};
    out.candidate_errors = {errors_at(out.best_candidate)};
  } else {
    // Lower-class ratios reaching into the upper class's range.
    auto first = std::lower_bound(r2.begin(), r2.end(), r1_min);
    for (auto it = first; it != r2.end(); ++it) {
      if (out.candidates.empty() || *it != out.candidates.back()) out.candidates.push_back(*it);
    }
    std::size_t best_errors = std::numeric_limits<std::size_t>::max();
    for (double c : out.candidates) {
      const std::size_t e = errors_at(c);
      out.candidate_errors.push_back(e);
      if (best_errors == std::numeric_limits<std::size_t>::max() ||
          preferred(c, e, out.best_candidate, best_errors)) {
        out.best_candidate = c;
        best_errors = e;
      }
    }
  }
  out.c_star = clamp_unit(out.best_candidate);
  return out;
}

namespace {

void require_fits(const LabeledDataset& data, std::span<const LocationScatter> fits) {
  if (fits.size() != data.num_classes()) {
    throw Error(ErrorKind::InvalidArgument, "one fit per class is required");
  }
  for (const auto& f : fits) {
    if (static_cast<std::size_t>(f.location.size()) != data.dim()) {
      throw Error(ErrorKind::DimensionMismatch, "fit dimension does not match the data");
    }
  }
}

}  // namespace

ThresholdSelection select_c_two_class(const LabeledDataset& train, std::span<const LocationScatter> fits) {
  if (train.num_classes() != 2) throw Error(ErrorKind::InvalidArgument, "two-class selection needs g = 2");
  require_fits(train, fits);
  const double d = fits[0].scatter.log_det() - fits[1].scatter.log_det();
  if (std::abs(d) < kSigmaTolerance) {
    ThresholdSelection out;
    out.c_star = 0.0;
    out.best_candidate = 0.0;
    out.degenerate = true;
    return out;
  }
  const std::size_t upper = d > 0.0 ? 0 : 1;
  const std::size_t lower = 1 - upper;
  const double sigma = std::abs(d);
  const Matrix d2 = class_distances(train.features, fits);
  std::vector<double> r_upper;
  std::vector<double> r_lower;
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const double ratio = (d2(r, static_cast<Eigen::Index>(lower)) - d2(r, static_cast<Eigen::Index>(upper))) / sigma;
    (train.labels[i] == upper ? r_upper : r_lower).push_back(ratio);
  }
  return select_c_from_ratios(r_upper, r_lower);
}

ThresholdSelection select_c_multiclass(const LabeledDataset& train, std::span<const LocationScatter> fits) {
  const std::size_t g = train.num_classes();
  if (g < 3) throw Error(ErrorKind::InvalidArgument, "multi-class selection needs g > 2");
  require_fits(train, fits);
  const Matrix d2 = class_distances(train.features, fits);
  std::vector<double> signed_sigma(g * g, 0.0);
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < g; ++j) {
      if (i != j) signed_sigma[i * g + j] = signed_sigma_d(fits, i, j);
    }
  }
  auto ratio = [&](Eigen::Index r, std::size_t i, std::size_t j) {
    return (d2(r, static_cast<Eigen::Index>(j)) - d2(r, static_cast<Eigen::Index>(i))) / signed_sigma[i * g + j];
  };

  // Candidate set T: u_ij(x) in [0, 1] over non-degenerate pairs and points
  // of either class of the pair. u_ij = u_ji, so unordered pairs suffice.
  std::vector<double> candidates;
  for (std::size_t n = 0; n < train.size(); ++n) {
    const auto r = static_cast<Eigen::Index>(n);
    const std::size_t own = train.labels[n];
    for (std::size_t other = 0; other < g; ++other) {
      if (other == own || signed_sigma[own * g + other] == 0.0) continue;
      const std::size_t i = std::min(own, other);
      const std::size_t j = std::max(own, other);
      const double u = ratio(r, i, j);
      if (u >= 0.0 && u <= 1.0) candidates.push_back(u);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  ThresholdSelection out;
  if (candidates.empty()) {
    out.c_star = 1.0;
    out.best_candidate = 1.0;
    out.degenerate = std::all_of(signed_sigma.begin(), signed_sigma.end(), [](double s) { return s == 0.0; });
    return out;
  }

  // A point of class i is correct at c iff for every j != i the comparison of
  // u_ij with c holds (u >= c when Sigma_d,ij > 0, u <= c when < 0) and
  // Delta^2_ij >= 0 for degenerate pairs. That is an interval [lo, hi] in c.
  std::vector<double> lows;
  std::vector<double> highs;
  for (std::size_t n = 0; n < train.size(); ++n) {
    const auto r = static_cast<Eigen::Index>(n);
    const std::size_t i = train.labels[n];
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool feasible = true;
    for (std::size_t j = 0; j < g && feasible; ++j) {
      if (j == i) continue;
      const double s = signed_sigma[i * g + j];
      if (s == 0.0) {
        feasible = d2(r, static_cast<Eigen::Index>(j)) - d2(r, static_cast<Eigen::Index>(i)) >= 0.0;
      } else if (s > 0.0) {
        hi = std::min(hi, ratio(r, std::min(i, j), std::max(i, j)));
      } else {
        lo = std::max(lo, ratio(r, std::min(i, j), std::max(i, j)));
      }
    }
    if (feasible && lo <= hi) {
      lows.push_back(lo);
      highs.push_back(hi);
    }
  }
  std::sort(lows.begin(), lows.end());
  std::sort(highs.begin(), highs.end());

  std::size_t best_errors = std::numeric_limits<std::size_t>::max();
  for (double c : candidates) {
    const auto started = static_cast<std::size_t>(std::upper_bound(lows.begin(), lows.end(), c) - lows.begin());
    const auto ended = static_cast<std::size_t>(std::lower_bound(highs.begin(), highs.end(), c) - highs.begin());
    const std::size_t errors = train.size() - (started - ended);
    out.candidates.push_back(c);
    out.candidate_errors.push_back(errors);
    if (best_errors == std::numeric_limits<std::size_t>::max() ||
        preferred(c, errors, out.best_candidate, best_errors)) {
      out.best_candidate = c;
      best_errors = errors;
    }
  }
  out.c_star = clamp_unit(out.best_candidate);
  return out;
}

ThresholdSelection select_c(const LabeledDataset& train, std::span<const LocationScatter> fits) {
  return train.num_classes() == 2 ? select_c_two_class(train, fits) : select_c_multiclass(train, fits);
}

GqdaModel fit_gqda(const LabeledDataset& train, const EstimatorSpec& spec, std::uint64_t seed) {
  if (train.num_classes() < 2) throw Error(ErrorKind::InvalidArgument, "training data needs at least two classes");
  std::vector<LocationScatter> fits;
  fits.reserve(train.num_classes());
  for (std::size_t k = 0; k < train.num_classes(); ++k) {
    Rng rng(derive_seed(seed, {k}));
    fits.push_back(fit(train.class_features(k), spec, rng));
  }
  const ThresholdSelection sel = select_c(train, fits);
  return GqdaModel(train.class_table, std::move(fits), sel.c_star, spec);
}

}  // namespace rgqda
