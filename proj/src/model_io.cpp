#include "rgqda/model_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "rgqda/error.hpp"

namespace rgqda {

namespace {

constexpr int kFormatVersion = 1;

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::ConfigError, path + ": " + what);
}

double number_at(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number()) config_error(path, "expected a number");
  return j.get<double>();
}

std::size_t count_at(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) config_error(path, "expected an integer");
  const auto v = j.get<long long>();
  if (v < 0) config_error(path, "expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

bool bool_at(const nlohmann::json& j, const std::string& path) {
  if (!j.is_boolean()) config_error(path, "expected true or false");
  return j.get<bool>();
}

}  // namespace

std::string hex_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_hex_double(const std::string& s) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    throw Error(ErrorKind::ParseError, "not a floating-point value: '" + s + "'");
  }
  return v;
}

nlohmann::json estimator_to_json(const EstimatorSpec& spec) {
  nlohmann::json j;
  j["name"] = std::string(estimator_label(spec.kind));
  switch (spec.kind) {
    case EstimatorKind::Classical:
      j["unbiased"] = spec.unbiased;
      break;
    case EstimatorKind::Winsorized:
      j["winsor_fraction"] = spec.winsor_fraction;
      break;
    case EstimatorKind::MVE:
    case EstimatorKind::MCD:
      if (spec.subset_size) j["subset_size"] = *spec.subset_size;
      j["n_subsamples"] = spec.n_subsamples;
      if (spec.kind == EstimatorKind::MCD) j["n_refine"] = spec.n_refine;
      j["consistency_correction"] = spec.consistency_correction;
      if (spec.kind == EstimatorKind::MVE) j["reweight"] = spec.reweight;
      break;
    case EstimatorKind::MHuber:
      if (spec.huber_k) j["huber_k"] = *spec.huber_k;
      j["tolerance"] = spec.tolerance;
      j["max_iterations"] = spec.max_iterations;
      break;
    case EstimatorKind::STukey:
      j["breakdown"] = spec.breakdown;
      j["n_subsamples"] = spec.n_subsamples;
      j["n_refine"] = spec.n_refine;
      j["tolerance"] = spec.tolerance;
      j["max_iterations"] = spec.max_iterations;
      break;
    case EstimatorKind::SD:
      if (spec.n_directions) j["n_directions"] = *spec.n_directions;
      j["trim_fraction"] = spec.trim_fraction;
      break;
  }
  return j;
}

EstimatorSpec estimator_from_json(const nlohmann::json& j, const std::string& path) {
  auto kind_of = [&](const nlohmann::json& name, const std::string& at) {
    if (!name.is_string()) config_error(at, "expected an estimator name");
    try {
      return parse_estimator(name.get<std::string>());
    } catch (const Error& e) {
      config_error(at, e.what());
    }
  };
  if (j.is_string()) return EstimatorSpec::of(kind_of(j, path));
  if (!j.is_object()) config_error(path, "expected an estimator name or object");
  if (!j.contains("name")) config_error(path + ".name", "missing");
  EstimatorSpec spec = EstimatorSpec::of(kind_of(j["name"], path + ".name"));
  for (const auto& [key, value] : j.items()) {
    const std::string at = path + "." + key;
    if (key == "name") continue;
    if (key == "unbiased") spec.unbiased = bool_at(value, at);
    else if (key == "winsor_fraction") spec.winsor_fraction = number_at(value, at);
    else if (key == "subset_size") spec.subset_size = count_at(value, at);
    else if (key == "n_subsamples") spec.n_subsamples = count_at(value, at);
    else if (key == "n_refine") spec.n_refine = count_at(value, at);
    else if (key == "huber_k") spec.huber_k = number_at(value, at);
    else if (key == "breakdown") spec.breakdown = number_at(value, at);
    else if (key == "n_directions") spec.n_directions = count_at(value, at);
    else if (key == "trim_fraction") spec.trim_fraction = number_at(value, at);
    else if (key == "tolerance") spec.tolerance = number_at(value, at);
    else if (key == "max_iterations") spec.max_iterations = static_cast<int>(count_at(value, at));
    else if (key == "consistency_correction") spec.consistency_correction = bool_at(value, at);
    else if (key == "reweight") spec.reweight = bool_at(value, at);
    else config_error(at, "unknown setting");
  }
  return spec;
}

nlohmann::json to_json(const ModelDocument& doc) {
  const GqdaModel& m = doc.model;
  nlohmann::json j;
  j["format"] = "rgqda-model";
  j["version"] = kFormatVersion;
  j["estimator"] = estimator_to_json(m.estimator());
  j["c_star"] = hex_double(m.c_star());
  j["dim"] = m.dim();
  j["label_column"] = doc.label_column;
  j["feature_names"] = doc.feature_names;
  nlohmann::json classes = nlohmann::json::array();
  for (std::size_t k = 0; k < m.num_classes(); ++k) {
    const auto& f = m.fits()[k];
    nlohmann::json c;
    c["label"] = m.classes()[k];
    std::vector<std::string> loc;
    for (Eigen::Index i = 0; i < f.location.size(); ++i) loc.push_back(hex_double(f.location(i)));
    c["location"] = loc;
    std::vector<std::string> scatter;  // row-major
    const Matrix& s = f.scatter.matrix();
    for (Eigen::Index r = 0; r < s.rows(); ++r) {
      for (Eigen::Index col = 0; col < s.cols(); ++col) scatter.push_back(hex_double(s(r, col)));
    }
    c["scatter"] = scatter;
    c["n_used"] = f.n_used;
    classes.push_back(std::move(c));
  }
  j["classes"] = std::move(classes);
  return j;
}

ModelDocument model_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object() || j.value("format", "") != "rgqda-model") {
      config_error("model", "not an rgqda model document");
    }
    if (j.at("version").get<int>() != kFormatVersion) config_error("model.version", "unsupported version");
    const EstimatorSpec spec = estimator_from_json(j.at("estimator"), "model.estimator");
    const double c_star = parse_hex_double(j.at("c_star").get<std::string>());
    const auto p = static_cast<Eigen::Index>(j.at("dim").get<std::size_t>());
    std::vector<std::string> labels;
    std::vector<LocationScatter> fits;
    for (const auto& c : j.at("classes")) {
      labels.push_back(c.at("label").get<std::string>());
      const auto loc = c.at("location").get<std::vector<std::string>>();
      const auto sc = c.at("scatter").get<std::vector<std::string>>();
      if (static_cast<Eigen::Index>(loc.size()) != p || static_cast<Eigen::Index>(sc.size()) != p * p) {
        throw Error(ErrorKind::DimensionMismatch, "model class " + labels.back() + " has the wrong size");
      }
      LocationScatter f;
      f.location.resize(p);
      for (Eigen::Index i = 0; i < p; ++i) f.location(i) = parse_hex_double(loc[static_cast<std::size_t>(i)]);
      Matrix s(p, p);
      for (Eigen::Index r = 0; r < p; ++r) {
        for (Eigen::Index col = 0; col < p; ++col) s(r, col) = parse_hex_double(sc[static_cast<std::size_t>(r * p + col)]);
      }
      f.scatter = SpdMatrix(s);
      f.n_used = c.value("n_used", std::size_t{0});
      f.estimator = spec.kind;
      fits.push_back(std::move(f));
    }
    ModelDocument doc{GqdaModel(std::move(labels), std::move(fits), c_star, spec),
                      j.value("feature_names", std::vector<std::string>{}),
                      j.value("label_column", std::string{})};
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("model: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const ModelDocument& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << to_json(doc).dump(2) << '\n';
  if (!out) throw Error(ErrorKind::IoError, "write failed: " + path.string());
}

ModelDocument load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigError, path.string() + ": " + e.what());
  }
  return model_from_json(j);
}

}  // namespace rgqda
