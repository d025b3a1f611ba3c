#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "rgqda/gqda.hpp"

namespace rgqda {

/// A fitted model plus what is needed to apply it to a CSV again.
struct ModelDocument {
  GqdaModel model;
  std::vector<std::string> feature_names;
  std::string label_column;
};

/// Doubles are stored as hex-float strings so a save/load cycle is exact.
nlohmann::json to_json(const ModelDocument& doc);
ModelDocument model_from_json(const nlohmann::json& j);

nlohmann::json estimator_to_json(const EstimatorSpec& spec);

/// Reads an estimator object or a bare name. Unknown keys are rejected with
/// Error{ConfigError} naming `path`.
EstimatorSpec estimator_from_json(const nlohmann::json& j, const std::string& path = "estimator");

void save_model(const std::filesystem::path& path, const ModelDocument& doc);
ModelDocument load_model(const std::filesystem::path& path);

std::string hex_double(double v);
double parse_hex_double(const std::string& s);

}  // namespace rgqda
