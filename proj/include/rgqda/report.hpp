#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "rgqda/estimators.hpp"

namespace rgqda {

struct ReplicationResult {
  std::size_t replication = 0;
  double me_percent = std::numeric_limits<double>::quiet_NaN();
  double c_star = std::numeric_limits<double>::quiet_NaN();
  bool failed = false;
  std::string failure;
  // Threshold chosen on the test set from fits to the test set, and its
  // test error; only filled for the Table-1 diagnostic.
  double c_test = std::numeric_limits<double>::quiet_NaN();
  double me_test_percent = std::numeric_limits<double>::quiet_NaN();
};

struct EstimatorReport {
  EstimatorSpec spec;
  std::vector<ReplicationResult> runs;  // indexed by replication

  std::size_t failures() const;
  double mean_me() const;
  double sd_me() const;  // divisor R - 1 over successful runs
  double mean_c_star() const;
  double mean_c_test() const;
  double mean_me_test() const;
};

struct Report {
  std::string name;
  bool table1 = false;
  std::vector<EstimatorReport> estimators;

  const EstimatorReport& at(EstimatorKind kind) const;
};

/// estimator,replication,me_percent,c_star,failed; failed rows carry "nan".
void write_report_csv(std::ostream& out, const Report& report);

/// estimator,replication,c_star,me_percent,c_test,me_test_percent,failed
void write_table1_csv(std::ostream& out, const Report& report);

nlohmann::json summary_json(const Report& report);

/// Parses a report CSV back (used by the summarize subcommand).
Report read_report_csv(std::istream& in);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

/// Runs task(i) for i in [0, count) on up to `jobs` threads. The first
/// exception thrown by any task is rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& task);

/// Per-replication hook: receives the replication index once it finishes.
using ProgressFn = std::function<void(std::size_t)>;

/// Seed path component distinguishing estimator streams within a replication.
std::uint64_t estimator_stream(EstimatorKind kind) noexcept;

}  // namespace rgqda
