#pragma once

#include <cstdint>
#include <vector>

#include "rgqda/dataset.hpp"
#include "rgqda/report.hpp"

namespace rgqda {

struct RealExperimentConfig {
  std::vector<EstimatorSpec> estimators;
  std::size_t replications = 500;
  double train_fraction = 0.7;
  double flip_fraction = 0.1;
  std::uint64_t seed = 0;
};

/// Repeated random stratified splits of `data`: flip a fraction of the
/// training labels, fit each estimator on the training part and record the
/// test ME%. Replication r splits from derive_seed(seed, {r, 0}), flips from
/// derive_seed(seed, {r, 1}) and fits from derive_seed(seed, {r, 2, stream}).
Report run_real_experiment(const LabeledDataset& data, const RealExperimentConfig& config,
                           std::size_t jobs = 1, const ProgressFn& progress = {});

}  // namespace rgqda
