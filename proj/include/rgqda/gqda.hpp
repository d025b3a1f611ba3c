#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rgqda/dataset.hpp"
#include "rgqda/estimators.hpp"

namespace rgqda {

/// Pairs whose log-determinant difference is below this are degenerate: they
/// compare by Mahalanobis distance alone and offer no threshold candidates.
inline constexpr double kSigmaTolerance = 1e-8;

/// Log-determinant difference of a class pair, oriented so the first class
/// has the larger determinant.
struct PairStatistic {
  std::size_t first = 0;
  std::size_t second = 0;
  double sigma_d = 0.0;  // log|S_first| - log|S_second| >= 0
  bool degenerate = false;
};

/// Trained (R)GQDA classifier: one location/scatter fit per class plus the
/// threshold c*. Equal priors throughout.
class GqdaModel {
 public:
  GqdaModel(std::vector<std::string> classes, std::vector<LocationScatter> fits, double c_star,
            EstimatorSpec estimator);

  std::size_t num_classes() const noexcept { return classes_.size(); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(fits_.front().location.size()); }
  const std::vector<std::string>& classes() const noexcept { return classes_; }
  const std::vector<LocationScatter>& fits() const noexcept { return fits_; }
  double c_star() const noexcept { return c_star_; }
  const EstimatorSpec& estimator() const noexcept { return estimator_; }

  /// Oriented statistics for every unordered pair, i < j in row-major order.
  const std::vector<PairStatistic>& pairs() const noexcept { return pairs_; }

  /// Same fits, different threshold.
  GqdaModel with_threshold(double c) const;

 private:
  std::vector<std::string> classes_;
  std::vector<LocationScatter> fits_;
  double c_star_;
  EstimatorSpec estimator_;
  std::vector<PairStatistic> pairs_;
};

/// log|S_i| - log|S_j| with the sign kept; zero for degenerate pairs.
double signed_sigma_d(std::span<const LocationScatter> fits, std::size_t i, std::size_t j);

/// d^2(x; class j) - d^2(x; class i).
double delta_sq(const Vector& x, std::size_t i, std::size_t j, const GqdaModel& model);

PairStatistic sigma_d(std::size_t i, std::size_t j, const GqdaModel& model);

/// Squared Mahalanobis distance of each row to each class fit (n x g).
Matrix class_distances(const Matrix& rows, std::span<const LocationScatter> fits);

/// Per-class margins m_i(x) = min_{j != i} [Delta^2_ij(x) - c * Sigma_d,ij].
Vector margins(const Vector& x, const GqdaModel& model);

/// argmax of the margins, ties to the lowest class index. For two classes this
/// is exactly "class 0 iff Delta^2 >= c * Sigma_d".
std::size_t classify(const Vector& x, const GqdaModel& model);
std::vector<std::size_t> classify_rows(const Matrix& rows, const GqdaModel& model);

/// Fraction of rows whose predicted class differs from the label. Labels are
/// matched to the model by name; unknown labels count as errors.
double misclassification_error(const GqdaModel& model, const LabeledDataset& data);

struct ThresholdSelection {
  double c_star = 1.0;        // after clamping to [0, 1]
  double best_candidate = 1.0;  // before clamping
  std::vector<double> candidates;
  std::vector<std::size_t> candidate_errors;  // training errors per candidate
  bool degenerate = false;    // no usable pair: rule reduces to MMD
  bool disjoint = false;      // two-class ratio sets separated
};

/// Two-class threshold from the ratios Delta^2 / Sigma_d of the class with the
/// larger determinant (`upper`) and the other class (`lower`). Upper points are
/// classified correctly when ratio >= c, lower points when ratio < c.
ThresholdSelection select_c_from_ratios(std::span<const double> upper, std::span<const double> lower);

/// Two-class threshold by minimum resubstitution error over the overlapping
/// order statistics. Degenerate pairs yield c* = 0.
ThresholdSelection select_c_two_class(const LabeledDataset& train, std::span<const LocationScatter> fits);

/// Multi-class threshold: candidates are the pairwise ratios in [0, 1]; the
/// minimizer of total training misclassification is returned (1 if none).
ThresholdSelection select_c_multiclass(const LabeledDataset& train, std::span<const LocationScatter> fits);

/// Two-class or multi-class selection by the number of classes.
ThresholdSelection select_c(const LabeledDataset& train, std::span<const LocationScatter> fits);

/// The same selection run on a test set; the diagnostic threshold c_test.
inline ThresholdSelection select_c_on_test(const LabeledDataset& test,
                                           std::span<const LocationScatter> fits) {
  return select_c(test, fits);
}

/// Fits every class of `train` with `spec` (class k draws from
/// derive_seed(seed, {k})) and selects c*.
GqdaModel fit_gqda(const LabeledDataset& train, const EstimatorSpec& spec, std::uint64_t seed);

}  // namespace rgqda
