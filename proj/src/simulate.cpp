#include "rgqda/simulate.hpp"

#include <cmath>

#include <boost/random/chi_squared_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

#include "experiment_internal.hpp"
#include "rgqda/dataset.hpp"
#include "rgqda/error.hpp"
#include "rgqda/model_io.hpp"

namespace rgqda {

DistributionSpec DistributionSpec::normal(Vector location, const Matrix& scatter) {
  DistributionSpec d;
  d.family = Family::Normal;
  d.location = std::move(location);
  d.scatter = SpdMatrix(scatter);
  if (d.scatter.dim() != d.location.size()) throw Error(ErrorKind::DimensionMismatch, "location and scatter sizes differ");
  return d;
}

DistributionSpec DistributionSpec::student_t(double df, Vector location, const Matrix& scatter) {
  if (!(df > 0.0)) throw Error(ErrorKind::InvalidArgument, "degrees of freedom must be positive");
  DistributionSpec d = normal(std::move(location), scatter);
  d.family = Family::StudentT;
  d.df = df;
  return d;
}

DistributionSpec DistributionSpec::cauchy(Vector location, const Matrix& scatter) {
  DistributionSpec d = normal(std::move(location), scatter);
  d.family = Family::Cauchy;
  d.df = 1.0;
  return d;
}

DistributionSpec DistributionSpec::with(Vector loc, const Matrix& s) const {
  DistributionSpec d = normal(std::move(loc), s);
  d.family = family;
  d.df = df;
  return d;
}

Matrix sample(const DistributionSpec& dist, std::size_t n, Rng& rng) {
  const Eigen::Index p = dist.dim();
  const auto rows = static_cast<Eigen::Index>(n);
  boost::random::normal_distribution<double> normal;
  Matrix z(rows, p);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) z(i, j) = normal(rng);
  }
  Matrix x = z * dist.scatter.chol().transpose();
  if (dist.family != Family::Normal) {
    const double q = dist.degrees_of_freedom();
    boost::random::chi_squared_distribution<double> chi2(q);
    for (Eigen::Index i = 0; i < rows; ++i) x.row(i) *= std::sqrt(q / chi2(rng));
  }
  x.rowwise() += dist.location.transpose();
  return x;
}

std::vector<DistributionSpec> make_contamination(std::span<const DistributionSpec> classes,
                                                 ContaminationKind kind, Design design) {
  if (design == Design::TwoClass && classes.size() != 2) {
    throw Error(ErrorKind::UnsupportedDesign, "the two-class outlier recipe needs exactly two classes");
  }
  const double sign = kind == ContaminationKind::Mild ? 9.0 : -9.0;
  std::vector<DistributionSpec> out;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    const DistributionSpec& c = classes[k];
    if (c.location.isZero(0.0)) {
      throw Error(ErrorKind::UnsupportedDesign,
                  "class " + std::to_string(k + 1) + " has a zero mean; outlier direction is undefined");
    }
    const Eigen::Index p = c.dim();
    const Matrix scatter = design == Design::TwoClass ? Matrix((k == 0 ? 4.0 : 16.0) * Matrix::Identity(p, p))
                                                      : Matrix(4.0 * c.scatter.matrix());
    out.push_back(c.with(sign * c.location, scatter));
  }
  return out;
}

std::vector<Matrix> contaminate(std::vector<Matrix> data, double fraction,
                                std::span<const DistributionSpec> outliers, Rng& rng) {
  if (!(fraction >= 0.0 && fraction < 0.5)) throw Error(ErrorKind::InvalidArgument, "contamination fraction must lie in [0, 0.5)");
  if (fraction == 0.0) return data;
  if (outliers.size() != data.size()) throw Error(ErrorKind::InvalidArgument, "one outlier distribution per class is required");
  for (std::size_t k = 0; k < data.size(); ++k) {
    Matrix& m = data[k];
    if (outliers[k].dim() != m.cols()) throw Error(ErrorKind::DimensionMismatch, "outlier dimension differs from class data");
    const auto n = static_cast<std::size_t>(m.rows());
    const auto count = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
    const auto rows = draw_distinct(rng, n, count);
    const Matrix replacement = sample(outliers[k], count, rng);
    for (std::size_t i = 0; i < count; ++i) m.row(static_cast<Eigen::Index>(rows[i])) = replacement.row(static_cast<Eigen::Index>(i));
  }
  return data;
}

std::vector<DistributionSpec> design_classes(Design design, Family family, double df) {
  auto make = [&](Vector mu, const Matrix& s) {
    switch (family) {
      case Family::Normal: return DistributionSpec::normal(std::move(mu), s);
      case Family::StudentT: return DistributionSpec::student_t(df, std::move(mu), s);
      case Family::Cauchy: return DistributionSpec::cauchy(std::move(mu), s);
    }
    throw Error(ErrorKind::InvalidArgument, "unknown family");
  };
  std::vector<DistributionSpec> out;
  if (design == Design::TwoClass) {
    out.push_back(make(-Vector::Ones(3), Matrix::Identity(3, 3)));
    out.push_back(make(Vector::Ones(3), 2.0 * Matrix::Identity(3, 3)));
  } else {
    const double signs[4][2] = {{1, 1}, {1, -1}, {-1, -1}, {-1, 1}};
    for (const auto& s : signs) {
      Vector mu(6);
      mu << s[0], s[0], s[0], s[1], s[1], s[1];
      out.push_back(make(std::move(mu), Matrix::Identity(6, 6)));
    }
  }
  return out;
}

namespace {

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::ConfigError, path + ": " + what);
}

const nlohmann::json& need(const nlohmann::json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) config_error(path + "." + key, "missing");
  return j.at(key);
}

std::size_t positive_count(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() > 0)) {
    config_error(path, "expected a positive integer");
  }
  const auto v = j.get<std::size_t>();
  if (v == 0) config_error(path, "expected a positive integer");
  return v;
}

double number(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number()) config_error(path, "expected a number");
  return j.get<double>();
}

std::string text(const nlohmann::json& j, const std::string& path) {
  if (!j.is_string()) config_error(path, "expected a string");
  return j.get<std::string>();
}

Vector vector_at(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) config_error(path, "expected a non-empty array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

Matrix matrix_at(const nlohmann::json& j, Eigen::Index p, const std::string& path) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != p) {
    config_error(path, "expected " + std::to_string(p) + " rows");
  }
  Matrix m(p, p);
  for (Eigen::Index r = 0; r < p; ++r) {
    const std::string at = path + "[" + std::to_string(r) + "]";
    const Vector row = vector_at(j[static_cast<std::size_t>(r)], at);
    if (row.size() != p) config_error(at, "expected " + std::to_string(p) + " entries");
    m.row(r) = row.transpose();
  }
  return m;
}

DistributionSpec distribution_at(const nlohmann::json& j, Family family, double df, const std::string& path) {
  if (!j.is_object()) config_error(path, "expected an object with location and scatter");
  Vector mu = vector_at(need(j, "location", path), path + ".location");
  const Matrix s = matrix_at(need(j, "scatter", path), mu.size(), path + ".scatter");
  try {
    switch (family) {
      case Family::Normal: return DistributionSpec::normal(std::move(mu), s);
      case Family::StudentT: return DistributionSpec::student_t(df, std::move(mu), s);
      case Family::Cauchy: return DistributionSpec::cauchy(std::move(mu), s);
    }
  } catch (const Error& e) {
    config_error(path, e.what());
  }
  config_error(path, "unknown family");
}

}  // namespace

ExperimentConfig experiment_from_json(const nlohmann::json& j) {
  const std::string root = "config";
  if (!j.is_object()) config_error(root, "expected an object");
  static const char* kKeys[] = {"name", "design", "family", "df", "classes", "n_train", "n_test",
                                "contamination", "estimators", "replications", "seed", "table1", "description"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) config_error(root + "." + key, "unknown field");
  }
  ExperimentConfig c;
  c.name = j.contains("name") ? text(j["name"], root + ".name") : std::string("experiment");

  Family family = Family::Normal;
  double df = 3.0;
  if (j.contains("family")) {
    const std::string f = text(j["family"], root + ".family");
    if (f == "normal") family = Family::Normal;
    else if (f == "t" || f == "student-t") family = Family::StudentT;
    else if (f == "cauchy") family = Family::Cauchy;
    else config_error(root + ".family", "expected normal, t or cauchy");
  }
  if (j.contains("df")) {
    df = number(j["df"], root + ".df");
    if (!(df > 0.0)) config_error(root + ".df", "must be positive");
  }

  std::optional<Design> design;
  if (j.contains("design")) {
    const std::string d = text(j["design"], root + ".design");
    if (d == "two-class") design = Design::TwoClass;
    else if (d == "four-class") design = Design::FourClass;
    else config_error(root + ".design", "expected two-class or four-class");
  }
  if (j.contains("classes")) {
    const auto& cl = j["classes"];
    if (!cl.is_array() || cl.size() < 2) config_error(root + ".classes", "expected at least two classes");
    for (std::size_t k = 0; k < cl.size(); ++k) {
      c.classes.push_back(distribution_at(cl[k], family, df, root + ".classes[" + std::to_string(k) + "]"));
      if (c.classes.back().dim() != c.classes.front().dim()) {
        config_error(root + ".classes[" + std::to_string(k) + "]", "dimension differs from class 1");
      }
    }
  } else if (design) {
    c.classes = design_classes(*design, family, df);
  } else {
    config_error(root + ".design", "missing (or give explicit classes)");
  }

  if (j.contains("n_train")) c.n_train = positive_count(j["n_train"], root + ".n_train");
  if (j.contains("n_test")) c.n_test = positive_count(j["n_test"], root + ".n_test");
  if (j.contains("replications")) c.replications = positive_count(j["replications"], root + ".replications");
  if (j.contains("seed")) {
    const auto& seed = j["seed"];
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
      config_error(root + ".seed", "expected a non-negative integer");
    }
    c.seed = seed.get<std::uint64_t>();
  }
  if (j.contains("table1")) {
    if (!j["table1"].is_boolean()) config_error(root + ".table1", "expected true or false");
    c.table1 = j["table1"].get<bool>();
  }

  if (j.contains("contamination")) {
    const std::string path = root + ".contamination";
    const auto& cj = j["contamination"];
    if (!cj.is_object()) config_error(path, "expected an object");
    for (const auto& [key, value] : cj.items()) {
      if (key != "fraction" && key != "kind" && key != "target" && key != "outliers") config_error(path + "." + key, "unknown field");
    }
    auto& cs = c.contamination;
    cs.fraction = number(need(cj, "fraction", path), path + ".fraction");
    if (!(cs.fraction >= 0.0 && cs.fraction < 0.5)) config_error(path + ".fraction", "must lie in [0, 0.5)");
    if (cj.contains("kind")) {
      const std::string k = text(cj["kind"], path + ".kind");
      if (k == "mild") cs.kind = ContaminationKind::Mild;
      else if (k == "hard") cs.kind = ContaminationKind::Hard;
      else config_error(path + ".kind", "expected mild or hard");
    }
    if (cj.contains("target")) {
      const std::string t = text(cj["target"], path + ".target");
      if (t == "train") cs.target = ContaminationTarget::TrainOnly;
      else if (t == "train-and-test") cs.target = ContaminationTarget::TrainAndTest;
      else config_error(path + ".target", "expected train or train-and-test");
    }
    if (cj.contains("outliers")) {
      const auto& oj = cj["outliers"];
      if (!oj.is_array() || oj.size() != c.classes.size()) config_error(path + ".outliers", "expected one entry per class");
      for (std::size_t k = 0; k < oj.size(); ++k) {
        cs.outliers.push_back(distribution_at(oj[k], family, df, path + ".outliers[" + std::to_string(k) + "]"));
      }
    } else if (cs.fraction > 0.0) {
      if (!design) config_error(path + ".outliers", "missing (no design recipe to derive them from)");
      try {
        cs.outliers = make_contamination(c.classes, cs.kind, *design);
      } catch (const Error& e) {
        config_error(path, e.what());
      }
    }
  }

  const auto& ej = need(j, "estimators", root);
  if (!ej.is_array() || ej.empty()) config_error(root + ".estimators", "expected a non-empty array");
  for (std::size_t i = 0; i < ej.size(); ++i) {
    c.estimators.push_back(estimator_from_json(ej[i], root + ".estimators[" + std::to_string(i) + "]"));
  }
  const std::size_t p = static_cast<std::size_t>(c.classes.front().dim());
  if (c.n_train <= p + 1) config_error(root + ".n_train", "must exceed p + 1");
  return c;
}

Report run_experiment(const ExperimentConfig& config, std::size_t jobs, const ProgressFn& progress) {
  if (!config.seed) throw Error(ErrorKind::ConfigError, "seed: required");
  if (config.classes.size() < 2) throw Error(ErrorKind::ConfigError, "classes: at least two are required");
  const std::uint64_t seed = *config.seed;
  const auto& cs = config.contamination;
  const bool contaminated = cs.fraction > 0.0;
  if (contaminated && cs.outliers.size() != config.classes.size()) {
    throw Error(ErrorKind::ConfigError, "contamination.outliers: one per class is required");
  }

  auto replicate = [&](std::size_t r) {
    Rng data_rng(derive_seed(seed, {r, 0}));
    std::vector<Matrix> train;
    std::vector<Matrix> test;
    for (const auto& cls : config.classes) {
      train.push_back(sample(cls, config.n_train, data_rng));
      test.push_back(sample(cls, config.n_test, data_rng));
    }
    if (contaminated) {
      Rng cont_rng(derive_seed(seed, {r, 1}));
      train = contaminate(std::move(train), cs.fraction, cs.outliers, cont_rng);
      if (cs.target == ContaminationTarget::TrainAndTest) {
        test = contaminate(std::move(test), cs.fraction, cs.outliers, cont_rng);
      }
    }
    const LabeledDataset train_set = from_class_matrices(train);
    const LabeledDataset test_set = from_class_matrices(test);
    std::vector<ReplicationResult> results;
    for (const auto& spec : config.estimators) {
      results.push_back(detail::evaluate(train_set, test_set, spec,
                                         derive_seed(seed, {r, 2, estimator_stream(spec.kind)}), config.table1));
    }
    return results;
  };
  return detail::collect(config.name, config.estimators, config.replications, jobs, config.table1, progress,
                         replicate);
}

}  // namespace rgqda
