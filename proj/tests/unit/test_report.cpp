#include <catch_amalgamated.hpp>

#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rgqda/error.hpp"
#include "rgqda/report.hpp"
#include "test_util.hpp"

using namespace rgqda;
using Catch::Matchers::WithinRel;

namespace {

Report sample_report() {
  Report r;
  r.name = "demo";
  EstimatorReport e;
  e.spec = EstimatorSpec::of(EstimatorKind::Classical);
  e.runs = {{0, 6.5, 1.0}, {1, 7.25, 0.75}, {2, 0.1, 0.5}};
  EstimatorReport m;
  m.spec = EstimatorSpec::of(EstimatorKind::MCD);
  ReplicationResult failed;
  failed.replication = 1;
  failed.failed = true;
  failed.failure = "singular";
  m.runs = {{0, 7.0, 0.9}, failed, {2, 8.0, 1.0}};
  r.estimators = {e, m};
  return r;
}

}  // namespace

TEST_CASE("shortest round-trip number formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(6.938) == "6.938");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("report CSV layout") {
  std::ostringstream out;
  write_report_csv(out, sample_report());
  CHECK(out.str() ==
        "estimator,replication,me_percent,c_star,failed\n"
        "GQDA,0,6.5,1,0\n"
        "GQDA,1,7.25,0.75,0\n"
        "GQDA,2,0.1,0.5,0\n"
        "MCD,0,7,0.9,0\n"
        "MCD,1,nan,nan,1\n"
        "MCD,2,8,1,0\n");
}

TEST_CASE("report CSV reads back") {
  std::ostringstream out;
  write_report_csv(out, sample_report());
  std::istringstream in(out.str());
  const Report back = read_report_csv(in);
  std::ostringstream again;
  write_report_csv(again, back);
  CHECK(again.str() == out.str());
  std::istringstream bad("estimator,replication,me\nGQDA,0,1\n");
  CHECK_THROWS_MATCHES(read_report_csv(bad), Error, test::KindIs(ErrorKind::ParseError));
}

TEST_CASE("aggregates skip failures and use divisor R - 1") {
  const Report r = sample_report();
  const EstimatorReport& g = r.at(EstimatorKind::Classical);
  const double mean = (6.5 + 7.25 + 0.1) / 3;
  const double var = ((6.5 - mean) * (6.5 - mean) + (7.25 - mean) * (7.25 - mean) + (0.1 - mean) * (0.1 - mean)) / 2;
  CHECK_THAT(g.mean_me(), WithinRel(mean, 1e-14));
  CHECK_THAT(g.sd_me(), WithinRel(std::sqrt(var), 1e-14));
  CHECK_THAT(g.mean_c_star(), WithinRel(0.75, 1e-14));
  const EstimatorReport& m = r.at(EstimatorKind::MCD);
  CHECK(m.failures() == 1);
  CHECK_THAT(m.mean_me(), WithinRel(7.5, 1e-14));
  CHECK_THAT(m.sd_me(), WithinRel(std::sqrt(0.5), 1e-14));
  const auto j = summary_json(r);
  CHECK(j.dump().find("\"failures\"") != std::string::npos);
}

TEST_CASE("parallel_for visits every index once") {
  std::vector<std::atomic<int>> hits(500);
  parallel_for(500, 4, [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_for(50, 3, [](std::size_t i) {
                    if (i == 17) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
}
