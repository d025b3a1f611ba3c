// Acceptance checks. Each criterion prints one PASS/FAIL/SKIP line per
// requirement; the process exits 0 only if every line passed (77 if the
// criterion was skipped).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/LU>
#include <boost/random/normal_distribution.hpp>

#include "rgqda/dataset.hpp"
#include "rgqda/error.hpp"
#include "rgqda/estimators.hpp"
#include "rgqda/gqda.hpp"
#include "rgqda/real_data.hpp"
#include "rgqda/report.hpp"
#include "rgqda/simulate.hpp"

namespace fs = std::filesystem;
using namespace rgqda;

namespace {

constexpr std::uint64_t kSeed = 7;
constexpr std::size_t kReplications = 50;
constexpr int kSkip = 77;

struct Outcome {
  int failed = 0;
  int passed = 0;
  bool skipped = false;
};

Outcome g_outcome;

void line(bool ok, const std::string& name, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  (ok ? g_outcome.passed : g_outcome.failed)++;
}

std::string fmt(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string band(double lo, double hi) { return "[" + fmt(lo, 1) + ", " + fmt(hi, 1) + "]"; }

std::size_t jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

Report run_preset(const std::string& preset, std::vector<EstimatorKind> kinds, std::size_t replications,
                  bool table1 = false) {
  std::ifstream in(fs::path(RGQDA_PRESET_DIR) / (preset + ".json"));
  if (!in) throw std::runtime_error("missing preset " + preset);
  ExperimentConfig cfg = experiment_from_json(nlohmann::json::parse(in));
  cfg.seed = kSeed;
  cfg.replications = replications;
  cfg.table1 = table1;
  cfg.estimators.clear();
  for (EstimatorKind k : kinds) cfg.estimators.push_back(EstimatorSpec::of(k));
  std::fprintf(stderr, "running %s (R=%zu, %zu estimators)\n", preset.c_str(), replications, kinds.size());
  return run_experiment(cfg, jobs());
}

std::string me_detail(const EstimatorReport& e) {
  return std::string(estimator_label(e.spec.kind)) + " mean ME " + fmt(e.mean_me()) + "% (SD " + fmt(e.sd_me()) +
         ", failures " + std::to_string(e.failures()) + ")";
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

// ---------------------------------------------------------------------------
// Simulation tables

void table2_normal() {
  const Report r = run_preset("two-class-normal-pure", {EstimatorKind::Classical}, kReplications);
  const auto& g = r.at(EstimatorKind::Classical);
  line(within(g.mean_me(), 6.0, 8.0), "table2-normal-me", me_detail(g) + " in " + band(6.0, 8.0));
  line(within(g.mean_c_star(), 0.9, 1.1), "table2-normal-cstar",
       "GQDA mean c* " + fmt(g.mean_c_star()) + " in " + band(0.9, 1.1));
}

void table2_t3() {
  const std::vector<EstimatorKind> all(std::begin(kAllEstimators), std::end(kAllEstimators));
  const Report r = run_preset("two-class-t3-pure", all, kReplications);
  for (const auto& e : r.estimators) {
    line(within(e.mean_me(), 11.0, 14.0), "table2-t3[" + std::string(estimator_label(e.spec.kind)) + "]",
         me_detail(e) + " in " + band(11.0, 14.0));
  }
}

void table2_cauchy() {
  const Report r = run_preset("two-class-cauchy-pure", {EstimatorKind::Classical, EstimatorKind::MCD}, kReplications);
  const auto& g = r.at(EstimatorKind::Classical);
  const auto& m = r.at(EstimatorKind::MCD);
  line(g.mean_me() >= 24.0, "table2-cauchy[GQDA]", me_detail(g) + " >= 24.0");
  line(within(m.mean_me(), 18.5, 22.0), "table2-cauchy[MCD]", me_detail(m) + " in " + band(18.5, 22.0));
}

void table3_hard() {
  const Report r = run_preset("two-class-normal-hard-10-train",
                              {EstimatorKind::Classical, EstimatorKind::MVE, EstimatorKind::MCD, EstimatorKind::STukey,
                               EstimatorKind::SD},
                              kReplications);
  const auto& g = r.at(EstimatorKind::Classical);
  line(g.mean_me() >= 30.0, "table3-hard10[GQDA]", me_detail(g) + " >= 30.0");
  for (const auto& e : r.estimators) {
    if (e.spec.kind == EstimatorKind::Classical) continue;
    line(e.mean_me() <= 9.0, "table3-hard10[" + std::string(estimator_label(e.spec.kind)) + "]",
         me_detail(e) + " <= 9.0");
  }
}

void table3_mild() {
  const std::vector<EstimatorKind> all(std::begin(kAllEstimators), std::end(kAllEstimators));
  const Report r = run_preset("two-class-normal-mild-05-train", all, kReplications);
  const auto& g = r.at(EstimatorKind::Classical);
  line(g.mean_me() >= 10.0, "table3-mild05[GQDA]", me_detail(g) + " >= 10.0");
  for (const auto& e : r.estimators) {
    if (e.spec.kind == EstimatorKind::Classical) continue;
    line(e.mean_me() <= 8.0, "table3-mild05[" + std::string(estimator_label(e.spec.kind)) + "]",
         me_detail(e) + " <= 8.0");
  }
}

void table1_diagnostic() {
  for (const char* kind : {"mild", "hard"}) {
    for (const char* level : {"05", "10", "15", "20"}) {
      const std::string preset = std::string("two-class-normal-") + kind + "-" + level + "-train";
      const Report r = run_preset(preset, {EstimatorKind::Classical}, kReplications, true);
      const auto& g = r.at(EstimatorKind::Classical);
      const std::string name = std::string("table1[") + kind + " " + level + "%]";
      line(within(g.mean_c_test(), 0.9, 1.1) && within(g.mean_me_test(), 6.0, 8.0), name + " test-selected",
           "c_test " + fmt(g.mean_c_test()) + " in " + band(0.9, 1.1) + ", ME " + fmt(g.mean_me_test()) + "% in " +
               band(6.0, 8.0));
      if (std::string(kind) == "mild") {
        line(g.mean_c_star() < 0.7, name + " train-selected", "c* " + fmt(g.mean_c_star()) + " < 0.7");
      }
    }
  }
}

void four_class() {
  const Report r = run_preset("four-class-normal-pure", {EstimatorKind::Classical}, 20);
  const auto& g = r.at(EstimatorKind::Classical);
  line(within(g.mean_me(), 7.0, 11.0), "four-class-normal", me_detail(g) + " in " + band(7.0, 11.0) + " at R=20");
}

// ---------------------------------------------------------------------------
// Exact oracles

Matrix normals(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  boost::random::normal_distribution<double> z;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = z(rng);
  }
  return m;
}

LocationScatter params(const Vector& mean, const Matrix& cov) {
  LocationScatter f;
  f.location = mean;
  f.scatter = SpdMatrix(cov);
  return f;
}

std::vector<LocationScatter> random_params(std::size_t g, Eigen::Index p, Rng& rng) {
  std::vector<LocationScatter> out;
  for (std::size_t k = 0; k < g; ++k) {
    const Matrix b = normals(p, p, rng);
    Matrix s = b * b.transpose() + 0.5 * Matrix::Identity(p, p);
    s = 0.5 * (s + s.transpose());
    out.push_back(params(normals(p, 1, rng), s));
  }
  return out;
}

double dist2(const Vector& x, const LocationScatter& f) {
  const Vector d = x - f.location;
  return d.dot(f.scatter.matrix().inverse() * d);
}

std::size_t bayes(const Vector& x, const std::vector<LocationScatter>& fits) {
  std::size_t best = 0;
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < fits.size(); ++k) {
    const double s = -0.5 * std::log(fits[k].scatter.matrix().determinant()) - 0.5 * dist2(x, fits[k]);
    if (s > top) {
      top = s;
      best = k;
    }
  }
  return best;
}

std::size_t nearest(const Vector& x, const std::vector<LocationScatter>& fits) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < fits.size(); ++k) {
    if (dist2(x, fits[k]) < dist2(x, fits[best])) best = k;
  }
  return best;
}

std::vector<std::string> names(std::size_t g) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < g; ++k) out.push_back(std::to_string(k + 1));
  return out;
}

void oracle_equivalences() {
  for (std::size_t g : {2u, 4u}) {
    Rng rng(derive_seed(kSeed, {g}));
    const auto fits = random_params(g, 3, rng);
    const Matrix x = 2.0 * normals(1000, 3, rng);
    const auto qda = classify_rows(x, GqdaModel(names(g), fits, 1.0, EstimatorSpec{}));
    const auto mmd = classify_rows(x, GqdaModel(names(g), fits, 0.0, EstimatorSpec{}));
    std::size_t agree_qda = 0, agree_mmd = 0;
    for (Eigen::Index i = 0; i < 1000; ++i) {
      const Vector xi = x.row(i).transpose();
      agree_qda += qda[static_cast<std::size_t>(i)] == bayes(xi, fits) ? 1 : 0;
      agree_mmd += mmd[static_cast<std::size_t>(i)] == nearest(xi, fits) ? 1 : 0;
    }
    const std::string gs = "g=" + std::to_string(g);
    line(agree_qda == 1000, "oracle-bayes-qda[" + gs + "]", std::to_string(agree_qda) + "/1000 points agree at c=1");
    line(agree_mmd == 1000, "oracle-mmd[" + gs + "]", std::to_string(agree_mmd) + "/1000 points agree at c=0");
  }

  // Threshold choice against an exhaustive recount over its candidate set.
  std::size_t ok = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    Rng rng(derive_seed(kSeed, {100, t}));
    const std::size_t n = 4 + t % 7;
    Matrix a = normals(static_cast<Eigen::Index>(n), 2, rng);
    Matrix b = 1.5 * normals(static_cast<Eigen::Index>(n), 2, rng);
    b.array() += 0.8;
    const LabeledDataset data = from_class_matrices(std::vector<Matrix>{a, b});
    const std::vector<LocationScatter> fits{fit_classical(a), fit_classical(b)};
    const ThresholdSelection s = select_c_two_class(data, fits);
    const double d = std::log(fits[0].scatter.matrix().determinant()) - std::log(fits[1].scatter.matrix().determinant());
    const std::size_t up = d > 0 ? 0 : 1;
    std::vector<double> ru, rl;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const Vector x = data.features.row(static_cast<Eigen::Index>(i)).transpose();
      const double r = (dist2(x, fits[1 - up]) - dist2(x, fits[up])) / std::abs(d);
      (data.labels[i] == up ? ru : rl).push_back(r);
    }
    auto errors = [&](double c) {
      std::size_t e = 0;
      for (double r : ru) e += r < c ? 1 : 0;
      for (double r : rl) e += r >= c ? 1 : 0;
      return e;
    };
    // Candidates are the lower-class ratios at or above the smallest upper ratio.
    const double min_upper = *std::min_element(ru.begin(), ru.end());
    std::vector<double> cand;
    for (double r : rl) {
      if (r >= min_upper) cand.push_back(r);
    }
    std::sort(cand.begin(), cand.end());
    if (cand.empty()) {
      ok += s.disjoint && errors(s.best_candidate) == 0 ? 1 : 0;
      continue;
    }
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (double c : cand) best = std::min(best, errors(c));
    bool match = s.candidates.size() == cand.size();
    std::size_t chosen = std::numeric_limits<std::size_t>::max();
    for (std::size_t k = 0; match && k < cand.size(); ++k) {
      match = std::abs(s.candidates[k] - cand[k]) <= 1e-9 * std::max(1.0, std::abs(cand[k])) &&
              s.candidate_errors[k] == errors(cand[k]);
      if (s.candidates[k] == s.best_candidate) chosen = errors(cand[k]);
    }
    ok += match && chosen == best ? 1 : 0;
  }
  line(ok == 100, "oracle-two-class-threshold", std::to_string(ok) + "/100 tiny problems minimal over candidates");
}

double exhaustive_mcd(const Matrix& x, std::size_t h) {
  const auto n = static_cast<std::size_t>(x.rows());
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(h), true);
  double best = std::numeric_limits<double>::infinity();
  do {
    Matrix sub(static_cast<Eigen::Index>(h), x.cols());
    Eigen::Index r = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (pick[i]) sub.row(r++) = x.row(static_cast<Eigen::Index>(i));
    }
    const Matrix c = sub.rowwise() - sub.colwise().mean();
    const double det = (c.transpose() * c / static_cast<double>(h)).determinant();
    if (det > 0) best = std::min(best, det);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

void estimator_oracles() {
  int agree = 0;
  for (std::uint64_t t = 0; t < 20; ++t) {
    Rng rng(derive_seed(kSeed, {200, t}));
    const std::size_t n = 10 + t % 6;
    Matrix x = normals(static_cast<Eigen::Index>(n), 2, rng);
    if (t % 2 == 0) x.topRows(2).array() += 1e6;
    const LocationScatter f = fit_mcd(x, EstimatorSpec::of(EstimatorKind::MCD), rng);
    const double oracle = exhaustive_mcd(x, default_subset_size(n, 2));
    agree += std::exp(f.raw_objective) <= (1 + 1e-6) * oracle ? 1 : 0;
  }
  line(agree >= 19, "oracle-fast-mcd", std::to_string(agree) + "/20 match the exhaustive minimum (need >= 19)");

  Rng rng(derive_seed(kSeed, {300}));
  Matrix x = normals(500, 3, rng);
  x.topRows(50).array() += 6.0;
  const LocationScatter m = fit_m_huber(x, EstimatorSpec::of(EstimatorKind::MHuber));
  const MEquationResiduals res = m_huber_residuals(x, m, default_huber_k(3));
  line(res.location < 1e-6 && res.scatter < 1e-6, "oracle-m-equations",
       "location residual " + std::to_string(res.location) + ", scatter residual " + std::to_string(res.scatter) +
           " < 1e-6");

  const EstimatorSpec s_spec = EstimatorSpec::of(EstimatorKind::STukey);
  const LocationScatter s = fit_s_tukey(x, s_spec, rng);
  const double c = s_constraint_residual(x, s, s_spec.breakdown);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", std::abs(c));
  line(std::abs(c) < 1e-6, "oracle-s-constraint", std::string("|mean rho - c| = ") + buf + " < 1e-6");
}

// ---------------------------------------------------------------------------
// Robustness properties

void breakdown() {
  const auto classes = design_classes(Design::TwoClass, Family::Normal);
  Rng rng(derive_seed(kSeed, {400}));
  const Matrix clean = sample(classes[0], 1000, rng);
  Matrix dirty = clean;
  const auto rows = draw_distinct(rng, 1000, 200);
  for (std::size_t i : rows) {
    dirty.row(static_cast<Eigen::Index>(i)) = 1e6 * Vector::Ones(3).transpose() + normals(1, 3, rng);
  }
  for (EstimatorKind kind : kAllEstimators) {
    const std::string label(estimator_label(kind));
    if (kind == EstimatorKind::Classical) {
      // The classical scatter of the contaminated sample fails the scale-relative
      // definiteness check, so compare the sample means directly.
      const double shift = (sample_moments(dirty).mean - sample_moments(clean).mean).norm();
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.4g", shift);
      line(shift > 1e4, "breakdown[" + label + "]", std::string("mean moved ") + buf + " > 1e4");
      continue;
    }
    Rng a(derive_seed(kSeed, {401})), b(derive_seed(kSeed, {401}));
    try {
      const double shift =
          (fit(dirty, EstimatorSpec::of(kind), b).location - fit(clean, EstimatorSpec::of(kind), a).location).norm();
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.4g", shift);
      line(shift < 1.0, "breakdown[" + label + "]", std::string("location moved ") + buf + " < 1");
    } catch (const Error& e) {
      line(false, "breakdown[" + label + "]", std::string("fit failed: ") + e.what());
    }
  }
}

void affine() {
  Rng rng(derive_seed(kSeed, {500}));
  for (int trial = 0; trial < 3; ++trial) {
    Matrix x = normals(150, 3, rng);
    x.topRows(15).array() += 6.0;
    const Matrix a = normals(3, 3, rng) + 2.0 * Matrix::Identity(3, 3);
    const Vector b = 5.0 * normals(3, 1, rng);
    const Matrix y = (x * a.transpose()).rowwise() + b.transpose();
    for (EstimatorKind kind : {EstimatorKind::Classical, EstimatorKind::MVE, EstimatorKind::MCD,
                               EstimatorKind::STukey, EstimatorKind::SD}) {
      Rng r1(derive_seed(kSeed, {501, static_cast<std::uint64_t>(trial)}));
      Rng r2(derive_seed(kSeed, {501, static_cast<std::uint64_t>(trial)}));
      const LocationScatter fx = fit(x, EstimatorSpec::of(kind), r1);
      const LocationScatter fy = fit(y, EstimatorSpec::of(kind), r2);
      const Vector loc = a * fx.location + b;
      const Matrix sc = a * fx.scatter.matrix() * a.transpose();
      const double el = (fy.location - loc).norm() / std::max(1.0, loc.norm());
      const double es = (fy.scatter.matrix() - sc).norm() / sc.norm();
      char buf[96];
      std::snprintf(buf, sizeof buf, "relative error location %.2g, scatter %.2g <= 1e-6", el, es);
      line(el <= 1e-6 && es <= 1e-6,
           "affine[" + std::string(estimator_label(kind)) + " #" + std::to_string(trial + 1) + "]", buf);
    }
  }
}

void determinism() {
  auto csv = [](const Report& r) {
    std::ostringstream out;
    write_report_csv(out, r);
    return out.str();
  };
  std::ifstream in(fs::path(RGQDA_PRESET_DIR) / "two-class-t3-hard-10-train-and-test.json");
  ExperimentConfig cfg = experiment_from_json(nlohmann::json::parse(in));
  cfg.seed = kSeed;
  cfg.replications = 6;
  cfg.n_train = 150;
  cfg.n_test = 300;
  const std::string one = csv(run_experiment(cfg, 1));
  const std::string four = csv(run_experiment(cfg, 4));
  line(one == four, "determinism[simulate]", "report CSV identical for jobs=1 and jobs=4 (" +
                                                 std::to_string(one.size()) + " bytes)");

  Rng rng(derive_seed(kSeed, {600}));
  std::vector<Matrix> classes;
  for (int k = 0; k < 3; ++k) {
    Matrix m = (1.0 + k) * normals(60, 4, rng);
    m.array() += 1.5 * k;
    classes.push_back(m);
  }
  const LabeledDataset data = from_class_matrices(classes);
  RealExperimentConfig rc;
  for (EstimatorKind k : kAllEstimators) rc.estimators.push_back(EstimatorSpec::of(k));
  rc.replications = 6;
  rc.seed = kSeed;
  const std::string a = csv(run_real_experiment(data, rc, 1));
  const std::string b = csv(run_real_experiment(data, rc, 4));
  line(a == b, "determinism[real-bench]", "report CSV identical for jobs=1 and jobs=4 (" +
                                              std::to_string(a.size()) + " bytes)");
}

// ---------------------------------------------------------------------------
// Real data (UCI files, used only when present)

std::optional<LabeledDataset> load_uci(const fs::path& file, const std::string& header, const CsvColumns& cols) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream buffer;
  buffer << header << '\n' << in.rdbuf();
  return read_csv(buffer, cols);
}

double median_me(const EstimatorReport& e) {
  std::vector<double> v;
  for (const auto& r : e.runs) {
    if (!r.failed) v.push_back(r.me_percent);
  }
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void real_data() {
  const char* env = std::getenv("RGQDA_DATA_DIR");
  const fs::path dir = env ? fs::path(env) : fs::path(RGQDA_DATA_DIR);
  std::string iono_header;
  for (int i = 1; i <= 34; ++i) iono_header += "x" + std::to_string(i) + ",";
  iono_header += "class";
  struct Source {
    std::string name;
    fs::path file;
    std::string header;
    CsvColumns cols;
  };
  const std::vector<Source> sources{
      {"ionosphere", dir / "ionosphere.data", iono_header, {"class", std::string("3-34")}},
      {"new-thyroid", dir / "new-thyroid.data", "class,t3resin,thyroxin,triiodothyronine,tsh,tsh_diff", {"class", std::nullopt}},
  };
  for (const auto& src : sources) {
    const auto data = load_uci(src.file, src.header, src.cols);
    if (!data) {
      std::printf("SKIP real-data[%s]: %s not found (set RGQDA_DATA_DIR)\n", src.name.c_str(), src.file.c_str());
      g_outcome.skipped = true;
      continue;
    }
    RealExperimentConfig rc;
    for (EstimatorKind k : kAllEstimators) rc.estimators.push_back(EstimatorSpec::of(k));
    rc.replications = kReplications;
    rc.flip_fraction = 0.1;
    rc.seed = kSeed;
    std::fprintf(stderr, "running %s (n=%zu, p=%zu)\n", src.name.c_str(), data->size(), data->dim());
    const Report r = run_real_experiment(*data, rc, jobs());
    const double base = median_me(r.at(EstimatorKind::Classical));
    for (const auto& e : r.estimators) {
      if (e.spec.kind == EstimatorKind::Classical) continue;
      const double m = median_me(e);
      line(m <= base, "real-data[" + src.name + " " + std::string(estimator_label(e.spec.kind)) + "]",
           "median ME " + fmt(m) + "% <= GQDA median " + fmt(base) + "%");
    }
  }
}

const std::map<std::string, std::function<void()>>& criteria() {
  static const std::map<std::string, std::function<void()>> table{
      {"table2-normal", table2_normal},
      {"table2-t3", table2_t3},
      {"table2-cauchy", table2_cauchy},
      {"table3-hard10", table3_hard},
      {"table3-mild05", table3_mild},
      {"table1-diagnostic", table1_diagnostic},
      {"four-class", four_class},
      {"oracle-equivalences", oracle_equivalences},
      {"estimator-oracles", estimator_oracles},
      {"breakdown", breakdown},
      {"affine-equivariance", affine},
      {"determinism", determinism},
      {"real-data", real_data},
  };
  return table;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> wanted(argv + 1, argv + argc);
  if (wanted.empty() || (wanted.size() == 1 && wanted[0] == "all")) {
    wanted.clear();
    for (const auto& [name, fn] : criteria()) wanted.push_back(name);
  }
  if (wanted.size() == 1 && (wanted[0] == "--list" || wanted[0] == "-l")) {
    for (const auto& [name, fn] : criteria()) std::cout << name << '\n';
    return 0;
  }
  for (const auto& name : wanted) {
    const auto it = criteria().find(name);
    if (it == criteria().end()) {
      std::cerr << "unknown criterion '" << name << "' (use --list)\n";
      return 2;
    }
    try {
      it->second();
    } catch (const std::exception& e) {
      line(false, name, std::string("threw: ") + e.what());
    }
  }
  std::printf("summary: %d passed, %d failed%s\n", g_outcome.passed, g_outcome.failed,
              g_outcome.skipped ? ", some skipped" : "");
  if (g_outcome.failed > 0) return 1;
  if (g_outcome.passed == 0 && g_outcome.skipped) return kSkip;
  return 0;
}
