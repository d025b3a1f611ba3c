#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rgqda/linalg.hpp"
#include "rgqda/rng.hpp"

namespace rgqda {

/// n x p features with class labels. Labels are dense indices into
/// `class_table`, which holds the original label strings in first-appearance
/// order.
struct LabeledDataset {
  Matrix features;
  std::vector<std::size_t> labels;
  std::vector<std::string> class_table;
  std::vector<std::string> column_names;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(features.cols()); }
  std::size_t num_classes() const noexcept { return class_table.size(); }

  std::vector<std::size_t> class_counts() const;
  std::vector<std::size_t> rows_of_class(std::size_t k) const;
  Matrix class_features(std::size_t k) const;

  /// Rows in the given order; the class table is kept as is.
  LabeledDataset subset(std::span<const std::size_t> rows) const;
};

/// Builds a dataset from per-class matrices; class k is labeled names[k] (or
/// its 1-based index when names is empty).
LabeledDataset from_class_matrices(std::span<const Matrix> classes,
                                   std::vector<std::string> names = {});

/// Column selector: a header name, a 1-based index, or an inclusive 1-based
/// range "a-b".
struct CsvColumns {
  std::string label;                        // name or 1-based index
  std::optional<std::string> features;      // comma list; default all but label
};

/// Parses a comma-separated file with a header row. Fields may be quoted with
/// '"' (doubled quotes escape). Throws Error{MissingColumn} for unknown
/// selectors and Error{ParseError} naming row and column for non-numeric
/// features.
LabeledDataset load_csv(const std::filesystem::path& path, const CsvColumns& columns);
LabeledDataset read_csv(std::istream& in, const CsvColumns& columns);

/// Writes features at round-trip precision followed by a "label" column.
void write_csv(std::ostream& out, const LabeledDataset& data, const std::string& label_name = "label");

/// Indices of columns whose values are all identical.
std::vector<std::size_t> constant_columns(const LabeledDataset& data);

/// Throws Error{ConstantColumn} naming the first constant column.
void require_nonconstant(const LabeledDataset& data);

LabeledDataset drop_columns(const LabeledDataset& data, std::span<const std::size_t> columns);

struct Split {
  LabeledDataset train;
  LabeledDataset test;
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
};

/// Per class, floor(fraction * n_k) rows (at least p + 2) go to training and
/// the rest to test, chosen uniformly. Throws Error{ClassTooSmall} when a
/// class cannot give p + 2 training rows and keep one for testing.
Split stratified_split(const LabeledDataset& data, double train_fraction, Rng& rng);

/// Relabels exactly floor(fraction * n) uniformly chosen rows with a label
/// drawn uniformly from the other classes. Returns the touched rows.
std::vector<std::size_t> flip_labels(LabeledDataset& data, double fraction, Rng& rng);

}  // namespace rgqda
