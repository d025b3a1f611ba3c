#pragma once

#include <cstdint>
#include <span>

#include "rgqda/dataset.hpp"
#include "rgqda/report.hpp"

namespace rgqda::detail {

/// Fits `spec` on `train`, selects c and scores `test`. Numerical failures
/// (degenerate or non-positive-definite scatters) are recorded in the result
/// instead of thrown. With `table1`, the same estimator is also fitted on the
/// test set and c is selected there.
ReplicationResult evaluate(const LabeledDataset& train, const LabeledDataset& test,
                           const EstimatorSpec& spec, std::uint64_t seed, bool table1);

/// Runs every replication on `jobs` threads and gathers per-estimator results.
/// `replicate(r)` returns one result per estimator, in config order.
Report collect(std::string name, std::span<const EstimatorSpec> estimators, std::size_t replications,
               std::size_t jobs, bool table1, const ProgressFn& progress,
               const std::function<std::vector<ReplicationResult>(std::size_t)>& replicate);

}  // namespace rgqda::detail
