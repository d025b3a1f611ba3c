#include <mutex>

#include "experiment_internal.hpp"
#include "rgqda/error.hpp"
#include "rgqda/gqda.hpp"

namespace rgqda::detail {

namespace {

bool recordable(ErrorKind kind) {
  return kind == ErrorKind::DegenerateData || kind == ErrorKind::NotPositiveDefinite ||
         kind == ErrorKind::TooFewObservations;
}

}  // namespace

ReplicationResult evaluate(const LabeledDataset& train, const LabeledDataset& test,
                           const EstimatorSpec& spec, std::uint64_t seed, bool table1) {
  ReplicationResult out;
  try {
    const GqdaModel model = fit_gqda(train, spec, seed);
    out.c_star = model.c_star();
    out.me_percent = 100.0 * misclassification_error(model, test);
    if (table1) {
      const GqdaModel on_test = fit_gqda(test, spec, derive_seed(seed, {0x7465u}));
      out.c_test = on_test.c_star();
      out.me_test_percent = 100.0 * misclassification_error(on_test, test);
    }
  } catch (const Error& e) {
    if (!recordable(e.kind())) throw;
    const std::size_t rep = out.replication;
    out = ReplicationResult{};
    out.replication = rep;
    out.failed = true;
    out.failure = std::string(to_string(e.kind())) + ": " + e.what();
  }
  return out;
}

Report collect(std::string name, std::span<const EstimatorSpec> estimators, std::size_t replications,
               std::size_t jobs, bool table1, const ProgressFn& progress,
               const std::function<std::vector<ReplicationResult>(std::size_t)>& replicate) {
  if (estimators.empty()) throw Error(ErrorKind::ConfigError, "estimators: at least one is required");
  if (replications < 1) throw Error(ErrorKind::ConfigError, "replications: must be >= 1");
  Report report;
  report.name = std::move(name);
  report.table1 = table1;
  for (const auto& spec : estimators) {
    EstimatorReport e;
    e.spec = spec;
    e.runs.resize(replications);
    report.estimators.push_back(std::move(e));
  }
  std::mutex progress_mutex;
  parallel_for(replications, jobs, [&](std::size_t r) {
    auto results = replicate(r);
    for (std::size_t e = 0; e < results.size(); ++e) {
      results[e].replication = r;
      report.estimators[e].runs[r] = std::move(results[e]);
    }
    if (progress) {
      std::lock_guard lock(progress_mutex);
      progress(r);
    }
  });
  return report;
}

}  // namespace rgqda::detail
