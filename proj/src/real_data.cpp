#include "rgqda/real_data.hpp"

#include "experiment_internal.hpp"
#include "rgqda/error.hpp"

namespace rgqda {

Report run_real_experiment(const LabeledDataset& data, const RealExperimentConfig& config, std::size_t jobs,
                           const ProgressFn& progress) {
  if (data.num_classes() < 2) throw Error(ErrorKind::InvalidArgument, "the data set has fewer than two classes");
  if (!(config.flip_fraction >= 0.0 && config.flip_fraction < 1.0)) {
    throw Error(ErrorKind::ConfigError, "flip_fraction: must lie in [0, 1)");
  }
  require_nonconstant(data);
  {
    // Surface ClassTooSmall before any work is scheduled.
    Rng probe(0);
    stratified_split(data, config.train_fraction, probe);
  }
  auto replicate = [&](std::size_t r) {
    Rng split_rng(derive_seed(config.seed, {r, 0}));
    Split split = stratified_split(data, config.train_fraction, split_rng);
    Rng flip_rng(derive_seed(config.seed, {r, 1}));
    flip_labels(split.train, config.flip_fraction, flip_rng);
    std::vector<ReplicationResult> results;
    for (const auto& spec : config.estimators) {
      results.push_back(detail::evaluate(split.train, split.test, spec,
                                         derive_seed(config.seed, {r, 2, estimator_stream(spec.kind)}), false));
    }
    return results;
  };
  return detail::collect("real-bench", config.estimators, config.replications, jobs, false, progress, replicate);
}

}  // namespace rgqda
