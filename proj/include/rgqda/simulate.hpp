#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rgqda/estimators.hpp"
#include "rgqda/report.hpp"

namespace rgqda {

enum class Family { Normal, StudentT, Cauchy };

/// Elliptical class distribution. Cauchy is sampled as StudentT with df = 1.
struct DistributionSpec {
  Family family = Family::Normal;
  double df = 0.0;  // StudentT only
  Vector location;
  SpdMatrix scatter;

  static DistributionSpec normal(Vector location, const Matrix& scatter);
  static DistributionSpec student_t(double df, Vector location, const Matrix& scatter);
  static DistributionSpec cauchy(Vector location, const Matrix& scatter);

  Eigen::Index dim() const noexcept { return location.size(); }
  double degrees_of_freedom() const noexcept { return family == Family::Cauchy ? 1.0 : df; }
  /// Same family, new location and scatter.
  DistributionSpec with(Vector location, const Matrix& scatter) const;
};

/// n rows of mu + L z (Normal) or mu + L z sqrt(q / chi2_q) (t). All n*p
/// Normal draws come first, then the n chi-square draws, so a t sample with
/// huge q shares its Normal part with the Normal sample of the same seed.
Matrix sample(const DistributionSpec& dist, std::size_t n, Rng& rng);

enum class ContaminationKind { Mild, Hard };
enum class ContaminationTarget { TrainOnly, TrainAndTest };
enum class Design { TwoClass, FourClass };

struct ContaminationSpec {
  double fraction = 0.0;
  ContaminationKind kind = ContaminationKind::Mild;
  ContaminationTarget target = ContaminationTarget::TrainOnly;
  std::vector<DistributionSpec> outliers;  // one per class
};

/// Outlier distributions of the published designs. Mild outliers sit at
/// 9 mu_i, hard ones at -9 mu_i, in the class's own family. Two-class
/// scatters are 4I and 16I for the first and second class; four-class ones
/// are 4 Sigma_i. Throws Error{UnsupportedDesign} for a zero mean vector or a
/// two-class recipe with g != 2.
std::vector<DistributionSpec> make_contamination(std::span<const DistributionSpec> classes,
                                                 ContaminationKind kind, Design design);

/// Replaces floor(fraction * n_i) uniformly chosen rows of class i by draws
/// from outliers[i].
std::vector<Matrix> contaminate(std::vector<Matrix> data, double fraction,
                                std::span<const DistributionSpec> outliers, Rng& rng);

/// The published class designs: two-class N3(-1, I) vs N3(1, 2I); four-class
/// p = 6 with Sigma = I and means of +-1 blocks.
std::vector<DistributionSpec> design_classes(Design design, Family family, double df = 3.0);

struct ExperimentConfig {
  std::string name;
  std::vector<DistributionSpec> classes;
  std::size_t n_train = 1000;  // per class
  std::size_t n_test = 4000;   // per class
  ContaminationSpec contamination;
  std::vector<EstimatorSpec> estimators;
  std::size_t replications = 1;
  std::optional<std::uint64_t> seed;
  bool table1 = false;
};

/// Reads a config document; errors are Error{ConfigError} with a field path.
ExperimentConfig experiment_from_json(const nlohmann::json& j);

/// Every replication draws fresh train/test sets from
/// derive_seed(seed, {r, 0}), contaminates them from derive_seed(seed, {r, 1})
/// and fits each estimator from derive_seed(seed, {r, 2, stream}). The Report
/// is therefore the same for any `jobs`.
Report run_experiment(const ExperimentConfig& config, std::size_t jobs = 1,
                      const ProgressFn& progress = {});

}  // namespace rgqda
