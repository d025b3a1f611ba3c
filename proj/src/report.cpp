#include "rgqda/report.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "rgqda/error.hpp"
#include "rgqda/model_io.hpp"

namespace rgqda {

namespace {

template <typename Get>
double mean_of(const std::vector<ReplicationResult>& runs, Get get) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : runs) {
    if (r.failed) continue;
    sum += get(r);
    ++n;
  }
  return n == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / static_cast<double>(n);
}

}  // namespace

std::size_t EstimatorReport::failures() const {
  std::size_t n = 0;
  for (const auto& r : runs) n += r.failed ? 1 : 0;
  return n;
}

double EstimatorReport::mean_me() const {
  return mean_of(runs, [](const ReplicationResult& r) { return r.me_percent; });
}

double EstimatorReport::sd_me() const {
  const double m = mean_me();
  double ss = 0.0;
  std::size_t n = 0;
  for (const auto& r : runs) {
    if (r.failed) continue;
    ss += (r.me_percent - m) * (r.me_percent - m);
    ++n;
  }
  return n < 2 ? std::numeric_limits<double>::quiet_NaN() : std::sqrt(ss / static_cast<double>(n - 1));
}

double EstimatorReport::mean_c_star() const {
  return mean_of(runs, [](const ReplicationResult& r) { return r.c_star; });
}

double EstimatorReport::mean_c_test() const {
  return mean_of(runs, [](const ReplicationResult& r) { return r.c_test; });
}

double EstimatorReport::mean_me_test() const {
  return mean_of(runs, [](const ReplicationResult& r) { return r.me_test_percent; });
}

const EstimatorReport& Report::at(EstimatorKind kind) const {
  for (const auto& e : estimators) {
    if (e.spec.kind == kind) return e;
  }
  throw Error(ErrorKind::InvalidArgument, "report has no " + std::string(estimator_label(kind)) + " rows");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_report_csv(std::ostream& out, const Report& report) {
  out << "estimator,replication,me_percent,c_star,failed\n";
  for (const auto& e : report.estimators) {
    for (const auto& r : e.runs) {
      out << estimator_label(e.spec.kind) << ',' << r.replication << ','
          << format_double(r.failed ? std::nan("") : r.me_percent) << ','
          << format_double(r.failed ? std::nan("") : r.c_star) << ',' << (r.failed ? 1 : 0) << '\n';
    }
  }
}

void write_table1_csv(std::ostream& out, const Report& report) {
  out << "estimator,replication,c_star,me_percent,c_test,me_test_percent,failed\n";
  for (const auto& e : report.estimators) {
    for (const auto& r : e.runs) {
      out << estimator_label(e.spec.kind) << ',' << r.replication << ',' << format_double(r.c_star) << ','
          << format_double(r.me_percent) << ',' << format_double(r.c_test) << ','
          << format_double(r.me_test_percent) << ',' << (r.failed ? 1 : 0) << '\n';
    }
  }
}

nlohmann::json summary_json(const Report& report) {
  auto num = [](double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); };
  nlohmann::json j;
  j["name"] = report.name;
  j["replications"] = report.estimators.empty() ? 0 : report.estimators.front().runs.size();
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& e : report.estimators) {
    nlohmann::json row;
    row["estimator"] = std::string(estimator_label(e.spec.kind));
    row["settings"] = estimator_to_json(e.spec);
    row["mean"] = num(e.mean_me());
    row["sd"] = num(e.sd_me());
    row["mean_c_star"] = num(e.mean_c_star());
    row["failures"] = e.failures();
    if (report.table1) {
      row["mean_c_test"] = num(e.mean_c_test());
      row["mean_me_test"] = num(e.mean_me_test());
    }
    nlohmann::json messages = nlohmann::json::array();
    for (const auto& r : e.runs) {
      if (r.failed) messages.push_back({{"replication", r.replication}, {"error", r.failure}});
    }
    if (!messages.empty()) row["failure_messages"] = std::move(messages);
    rows.push_back(std::move(row));
  }
  j["estimators"] = std::move(rows);
  return j;
}

Report read_report_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::EmptyDataset, "report CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "estimator,replication,me_percent,c_star,failed") {
    throw Error(ErrorKind::ParseError, "unexpected report header: " + line);
  }
  Report report;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 5) throw Error(ErrorKind::ParseError, "report row " + std::to_string(row) + ": expected 5 fields");
    ReplicationResult r;
    try {
      r.replication = std::stoul(f[1]);
      r.failed = f[4] == "1";
      r.me_percent = std::stod(f[2]);
      r.c_star = std::stod(f[3]);
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "report row " + std::to_string(row) + ": bad number");
    }
    const EstimatorKind kind = parse_estimator(f[0]);
    auto it = std::find_if(report.estimators.begin(), report.estimators.end(),
                           [&](const EstimatorReport& e) { return e.spec.kind == kind; });
    if (it == report.estimators.end()) {
      report.estimators.push_back(EstimatorReport{EstimatorSpec::of(kind), {}});
      it = std::prev(report.estimators.end());
    }
    it->runs.push_back(r);
  }
  return report;
}

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& task) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (!stop.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        stop = true;
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(jobs);
  for (std::size_t t = 0; t < jobs; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

std::uint64_t estimator_stream(EstimatorKind kind) noexcept { return static_cast<std::uint64_t>(kind); }

}  // namespace rgqda
