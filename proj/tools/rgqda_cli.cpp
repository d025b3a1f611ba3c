// rgqda command-line tool: fit, predict, simulate, real-bench, summarize.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rgqda/dataset.hpp"
#include "rgqda/error.hpp"
#include "rgqda/gqda.hpp"
#include "rgqda/model_io.hpp"
#include "rgqda/real_data.hpp"
#include "rgqda/report.hpp"
#include "rgqda/simulate.hpp"

#ifndef RGQDA_PRESET_DIR
#define RGQDA_PRESET_DIR "configs/presets"
#endif

namespace fs = std::filesystem;
using namespace rgqda;

namespace {

enum Exit { kOk = 0, kUsage = 2, kData = 3, kNumerical = 4 };

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::ConfigError:
    case ErrorKind::UnsupportedDesign:
      return kUsage;
    case ErrorKind::NotPositiveDefinite:
    case ErrorKind::DegenerateData:
      return kNumerical;
    default:
      return kData;
  }
}

// One line, key=value, message last so it may contain spaces.
void report_error(const char* kind, const std::string& message) {
  std::string flat = message;
  for (char& c : flat) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  std::cerr << "error kind=" << kind << " message=" << flat << '\n';
}

std::vector<EstimatorSpec> parse_estimator_list(const std::string& list) {
  std::vector<EstimatorSpec> out;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) continue;
    if (item == "all") {
      for (EstimatorKind k : kAllEstimators) out.push_back(EstimatorSpec::of(k));
      continue;
    }
    out.push_back(EstimatorSpec::of(parse_estimator(item)));
  }
  if (out.empty()) throw Error(ErrorKind::InvalidArgument, "--estimators: empty list");
  return out;
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigError, path.string() + ": " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "write failed: " + path.string());
}

void write_outputs(const Report& report, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir.string() + ": " + ec.message());
  std::ostringstream csv;
  write_report_csv(csv, report);
  write_text(dir / "report.csv", csv.str());
  write_text(dir / "summary.json", summary_json(report).dump(2) + "\n");
  if (report.table1) {
    std::ostringstream t1;
    write_table1_csv(t1, report);
    write_text(dir / "table1.csv", t1.str());
  }
}

std::string fixed(double v, int digits = 3) {
  if (std::isnan(v)) return "nan";
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

void print_summary(const Report& report, std::ostream& out) {
  out << "estimator  mean_me%(sd)          mean_c*  failures";
  if (report.table1) out << "  mean_c_test  mean_me_test%";
  out << '\n';
  for (const auto& e : report.estimators) {
    out << std::left << std::setw(11) << estimator_label(e.spec.kind) << std::setw(22)
        << (fixed(e.mean_me()) + " (" + fixed(e.sd_me()) + ")") << std::setw(9) << fixed(e.mean_c_star())
        << e.failures();
    if (report.table1) out << "         " << std::setw(13) << fixed(e.mean_c_test()) << fixed(e.mean_me_test());
    out << '\n';
  }
}

struct DataOptions {
  std::string path;
  std::string label_column = "label";
  std::optional<std::string> feature_columns;
  bool drop_constant = false;
};

void add_data_options(CLI::App* cmd, DataOptions& o, bool label_required) {
  cmd->add_option("--data", o.path, "input CSV with a header row")->required();
  auto* label = cmd->add_option("--label-column", o.label_column, "label column name or 1-based index");
  if (label_required) label->capture_default_str();
  cmd->add_option("--feature-columns", o.feature_columns, "comma list of names, indices or ranges a-b");
  cmd->add_flag("--drop-constant-columns", o.drop_constant, "drop zero-variance feature columns");
}

LabeledDataset load_data(const DataOptions& o) {
  LabeledDataset data = load_csv(o.path, CsvColumns{o.label_column, o.feature_columns});
  if (o.drop_constant) {
    const auto cols = constant_columns(data);
    if (!cols.empty()) {
      for (std::size_t c : cols) std::cerr << "dropping constant column " << data.column_names[c] << '\n';
      data = drop_columns(data, cols);
    }
  }
  require_nonconstant(data);
  return data;
}

EstimatorSpec resolve_estimator(const std::string& name, const std::optional<std::string>& settings) {
  if (!settings) return EstimatorSpec::of(parse_estimator(name));
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(*settings);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("--estimator-settings: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::ConfigError, "--estimator-settings: expected a JSON object");
  j["name"] = name;
  return estimator_from_json(j, "estimator");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust generalized quadratic discriminant analysis"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "per-replication log lines on stderr");

  // fit
  DataOptions fit_data;
  std::string fit_estimator = "GQDA";
  std::optional<std::string> fit_settings;
  std::optional<std::uint64_t> fit_seed;
  std::string fit_out;
  auto* fit_cmd = app.add_subcommand("fit", "fit a model and write it as JSON");
  add_data_options(fit_cmd, fit_data, true);
  fit_cmd->add_option("--estimator", fit_estimator, "GQDA, W, MVE, MCD, M, S or SD")->capture_default_str();
  fit_cmd->add_option("--estimator-settings", fit_settings, "JSON object of estimator settings");
  fit_cmd->add_option("--seed", fit_seed, "seed (required for MVE, MCD, S, SD)");
  fit_cmd->add_option("--out", fit_out, "model JSON path")->required();

  // predict
  std::string predict_model;
  std::string predict_data;
  std::optional<std::string> predict_label;
  std::string predict_out;
  auto* predict_cmd = app.add_subcommand("predict", "classify the rows of a CSV");
  predict_cmd->add_option("--model", predict_model, "model JSON from fit")->required();
  predict_cmd->add_option("--data", predict_data, "input CSV with a header row")->required();
  predict_cmd->add_option("--label-column", predict_label,
                          "true label column; defaults to the model's if present in the file");
  predict_cmd->add_option("--out", predict_out, "predictions CSV path")->required();

  // simulate
  std::optional<std::string> sim_config;
  std::optional<std::string> sim_preset;
  std::optional<std::uint64_t> sim_seed;
  std::size_t sim_jobs = 1;
  std::string sim_out = "out";
  std::optional<std::string> sim_estimators;
  std::optional<std::size_t> sim_replications;
  bool sim_table1 = false;
  auto* sim_cmd = app.add_subcommand("simulate", "run a replicated Monte-Carlo experiment");
  auto* sim_cfg_opt = sim_cmd->add_option("--config", sim_config, "experiment JSON");
  sim_cmd->add_option("--preset", sim_preset, "name of a checked-in preset")->excludes(sim_cfg_opt);
  sim_cmd->add_option("--seed", sim_seed, "master seed (required unless the config has one)");
  sim_cmd->add_option("--jobs", sim_jobs, "worker threads")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--out-dir", sim_out, "output directory")->capture_default_str();
  sim_cmd->add_option("--estimators", sim_estimators, "comma list overriding the config");
  sim_cmd->add_option("--replications", sim_replications, "overrides the config")->check(CLI::PositiveNumber);
  sim_cmd->add_flag("--table1", sim_table1, "also select c on the test set (c_test)");

  // real-bench
  DataOptions rb_data;
  std::optional<std::string> rb_config;
  std::optional<std::uint64_t> rb_seed;
  std::size_t rb_jobs = 1;
  std::string rb_out = "out";
  std::optional<std::string> rb_estimators;
  std::optional<std::size_t> rb_replications;
  std::optional<double> rb_train_fraction;
  std::optional<double> rb_flip_fraction;
  auto* rb_cmd = app.add_subcommand("real-bench", "repeated split / label-flip benchmark on a CSV");
  add_data_options(rb_cmd, rb_data, true);
  rb_cmd->add_option("--config", rb_config, "JSON with estimators, replications, train_fraction, flip_fraction");
  rb_cmd->add_option("--seed", rb_seed, "master seed")->required();
  rb_cmd->add_option("--jobs", rb_jobs, "worker threads")->check(CLI::PositiveNumber);
  rb_cmd->add_option("--out-dir", rb_out, "output directory")->capture_default_str();
  rb_cmd->add_option("--estimators", rb_estimators, "comma list (default all)");
  rb_cmd->add_option("--replications", rb_replications, "default 500")->check(CLI::PositiveNumber);
  rb_cmd->add_option("--train-fraction", rb_train_fraction, "default 0.7");
  rb_cmd->add_option("--flip-fraction", rb_flip_fraction, "default 0.1");

  // summarize
  std::string sum_input;
  std::optional<std::string> sum_out;
  auto* sum_cmd = app.add_subcommand("summarize", "mean (SD) table from a report CSV");
  sum_cmd->add_option("--input", sum_input, "report CSV")->required();
  sum_cmd->add_option("--out", sum_out, "summary JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("Usage", e.what());
    return kUsage;
  }

  auto progress = [&](std::size_t r) {
    if (verbose) std::cerr << "replication " << r << " done\n";
  };

  try {
    if (fit_cmd->parsed()) {
      const EstimatorSpec spec = resolve_estimator(fit_estimator, fit_settings);
      if (is_stochastic(spec.kind) && !fit_seed) {
        throw Error(ErrorKind::InvalidArgument, "--seed is required for estimator " +
                                                    std::string(estimator_label(spec.kind)));
      }
      const LabeledDataset data = load_data(fit_data);
      const GqdaModel model = fit_gqda(data, spec, fit_seed.value_or(0));
      const double me = misclassification_error(model, data);
      save_model(fit_out, ModelDocument{model, data.column_names, fit_data.label_column});
      std::cout << "classes=" << model.num_classes() << " c_star=" << format_double(model.c_star())
                << " resubstitution_me=" << format_double(me) << '\n';
    } else if (predict_cmd->parsed()) {
      const ModelDocument doc = load_model(predict_model);
      const GqdaModel& model = doc.model;
      std::optional<std::string> label = predict_label;
      if (!label && !doc.label_column.empty()) {
        // Use the model's label column only when the file has it.
        std::ifstream probe(predict_data);
        std::string header;
        std::getline(probe, header);
        if (("," + header + ",").find("," + doc.label_column + ",") != std::string::npos) label = doc.label_column;
      }
      std::string features;
      for (const auto& f : doc.feature_names) features += (features.empty() ? "" : ",") + f;
      LabeledDataset data;
      if (label) {
        data = load_csv(predict_data, CsvColumns{*label, doc.feature_names.empty() ? std::nullopt
                                                                                   : std::optional(features)});
      } else {
        // No labels: read features by name through a synthetic label column.
        std::ifstream in(predict_data, std::ios::binary);
        if (!in) throw Error(ErrorKind::IoError, "cannot open " + predict_data);
        std::stringstream buffer;
        std::string line;
        bool first = true;
        while (std::getline(in, line)) {
          if (!line.empty() && line.back() == '\r') line.pop_back();
          if (line.empty() && !first) continue;
          buffer << line << (first ? ",__row_label__\n" : ",?\n");
          first = false;
        }
        data = read_csv(buffer, CsvColumns{"__row_label__", doc.feature_names.empty() ? std::nullopt
                                                                                      : std::optional(features)});
      }
      if (data.dim() != model.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "model has p=" + std::to_string(model.dim()) +
                                                      " but the data has p=" + std::to_string(data.dim()));
      }
      std::ostringstream out;
      out << "row,predicted";
      for (const auto& c : model.classes()) out << ",margin_" << c;
      out << '\n';
      std::size_t wrong = 0;
      for (std::size_t i = 0; i < data.size(); ++i) {
        const Vector m = margins(data.features.row(static_cast<Eigen::Index>(i)).transpose(), model);
        std::size_t best = 0;
        for (Eigen::Index k = 1; k < m.size(); ++k) {
          if (m(k) > m(static_cast<Eigen::Index>(best))) best = static_cast<std::size_t>(k);
        }
        out << i + 1 << ',' << model.classes()[best];
        for (Eigen::Index k = 0; k < m.size(); ++k) out << ',' << format_double(m(k));
        out << '\n';
        if (label) wrong += model.classes()[best] != data.class_table[data.labels[i]] ? 1 : 0;
      }
      write_text(predict_out, out.str());
      std::cout << "rows=" << data.size();
      if (label) std::cout << " me_percent=" << format_double(100.0 * static_cast<double>(wrong) / static_cast<double>(data.size()));
      std::cout << '\n';
    } else if (sim_cmd->parsed()) {
      if (!sim_config && !sim_preset) throw Error(ErrorKind::InvalidArgument, "simulate: give --config or --preset");
      const fs::path path = sim_config ? fs::path(*sim_config) : fs::path(RGQDA_PRESET_DIR) / (*sim_preset + ".json");
      if (sim_preset && !fs::exists(path)) throw Error(ErrorKind::ConfigError, "unknown preset " + *sim_preset);
      ExperimentConfig cfg = experiment_from_json(read_json(path));
      if (sim_seed) cfg.seed = sim_seed;
      if (!cfg.seed) throw Error(ErrorKind::InvalidArgument, "--seed is required");
      if (sim_estimators) cfg.estimators = parse_estimator_list(*sim_estimators);
      if (sim_replications) cfg.replications = *sim_replications;
      if (sim_table1) cfg.table1 = true;
      const Report report = run_experiment(cfg, sim_jobs, progress);
      write_outputs(report, sim_out);
      print_summary(report, std::cout);
    } else if (rb_cmd->parsed()) {
      RealExperimentConfig cfg;
      for (EstimatorKind k : kAllEstimators) cfg.estimators.push_back(EstimatorSpec::of(k));
      if (rb_config) {
        const nlohmann::json j = read_json(*rb_config);
        if (!j.is_object()) throw Error(ErrorKind::ConfigError, "config: expected an object");
        for (const auto& [key, value] : j.items()) {
          const std::string at = "config." + key;
          try {
            if (key == "estimators") {
              if (!value.is_array() || value.empty()) throw Error(ErrorKind::ConfigError, at + ": expected a non-empty array");
              cfg.estimators.clear();
              for (std::size_t i = 0; i < value.size(); ++i) {
                cfg.estimators.push_back(estimator_from_json(value[i], at + "[" + std::to_string(i) + "]"));
              }
            } else if (key == "replications") {
              cfg.replications = value.get<std::size_t>();
            } else if (key == "train_fraction") {
              cfg.train_fraction = value.get<double>();
            } else if (key == "flip_fraction") {
              cfg.flip_fraction = value.get<double>();
            } else if (key == "label_column") {
              rb_data.label_column = value.get<std::string>();
            } else if (key == "feature_columns") {
              rb_data.feature_columns = value.get<std::string>();
            } else if (key == "drop_constant_columns") {
              rb_data.drop_constant = value.get<bool>();
            } else {
              throw Error(ErrorKind::ConfigError, at + ": unknown field");
            }
          } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::ConfigError, at + ": " + e.what());
          }
        }
      }
      if (rb_estimators) cfg.estimators = parse_estimator_list(*rb_estimators);
      if (rb_replications) cfg.replications = *rb_replications;
      if (rb_train_fraction) cfg.train_fraction = *rb_train_fraction;
      if (rb_flip_fraction) cfg.flip_fraction = *rb_flip_fraction;
      cfg.seed = *rb_seed;
      const LabeledDataset data = load_data(rb_data);
      const Report report = run_real_experiment(data, cfg, rb_jobs, progress);
      write_outputs(report, rb_out);
      print_summary(report, std::cout);
    } else if (sum_cmd->parsed()) {
      std::ifstream in(sum_input, std::ios::binary);
      if (!in) throw Error(ErrorKind::IoError, "cannot open " + sum_input);
      Report report = read_report_csv(in);
      report.name = fs::path(sum_input).stem().string();
      print_summary(report, std::cout);
      if (sum_out) write_text(*sum_out, summary_json(report).dump(2) + "\n");
    }
  } catch (const Error& e) {
    report_error(to_string(e.kind()), e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    report_error("Internal", e.what());
    return 1;
  }
  return kOk;
}
