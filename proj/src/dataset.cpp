#include "rgqda/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include <boost/random/uniform_int_distribution.hpp>

#include "rgqda/error.hpp"

namespace rgqda {

std::vector<std::size_t> LabeledDataset::class_counts() const {
  std::vector<std::size_t> counts(num_classes(), 0);
  for (std::size_t l : labels) ++counts[l];
  return counts;
}

std::vector<std::size_t> LabeledDataset::rows_of_class(std::size_t k) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == k) rows.push_back(i);
  }
  return rows;
}

Matrix LabeledDataset::class_features(std::size_t k) const {
  const auto rows = rows_of_class(k);
  return select_rows(features, rows);
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> rows) const {
  LabeledDataset out;
  out.features = select_rows(features, rows);
  out.labels.reserve(rows.size());
  for (std::size_t r : rows) out.labels.push_back(labels.at(r));
  out.class_table = class_table;
  out.column_names = column_names;
  return out;
}

LabeledDataset from_class_matrices(std::span<const Matrix> classes, std::vector<std::string> names) {
  if (classes.empty()) throw Error(ErrorKind::EmptyDataset, "no class matrices given");
  if (!names.empty() && names.size() != classes.size()) {
    throw Error(ErrorKind::InvalidArgument, "one name per class matrix is required");
  }
  const Eigen::Index p = classes.front().cols();
  Eigen::Index n = 0;
  for (const auto& m : classes) {
    if (m.cols() != p) throw Error(ErrorKind::DimensionMismatch, "class matrices differ in dimension");
    n += m.rows();
  }
  LabeledDataset out;
  out.features.resize(n, p);
  Eigen::Index at = 0;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    out.features.middleRows(at, classes[k].rows()) = classes[k];
    at += classes[k].rows();
    out.labels.insert(out.labels.end(), static_cast<std::size_t>(classes[k].rows()), k);
    out.class_table.push_back(names.empty() ? std::to_string(k + 1) : names[k]);
  }
  for (Eigen::Index j = 0; j < p; ++j) out.column_names.push_back("x" + std::to_string(j + 1));
  return out;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Splits one record. Quoted fields may contain commas and doubled quotes, and
// may span lines, so the caller passes the stream for continuation.
bool read_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line_no) {
  fields.clear();
  std::string line;
  if (!std::getline(in, line)) return false;
  ++line_no;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  std::size_t i = 0;
  while (true) {
    if (i == line.size()) {
      if (quoted) {
        if (!std::getline(in, line)) throw Error(ErrorKind::ParseError, "unterminated quoted field at line " + std::to_string(line_no));
        ++line_no;
        field += '\n';
        i = 0;
        continue;
      }
      break;
    }
    const char ch = line[i++];
    if (quoted) {
      if (ch == '"') {
        if (i < line.size() && line[i] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
      was_quoted = true;
    } else if (ch == ',') {
      fields.push_back(was_quoted ? field : trim(field));
      field.clear();
      was_quoted = false;
    } else {
      field += ch;
    }
  }
  if (!field.empty() && field.back() == '\r' && !was_quoted) field.pop_back();
  fields.push_back(was_quoted ? field : trim(field));
  return true;
}

bool all_blank(const std::vector<std::string>& fields) {
  return std::all_of(fields.begin(), fields.end(), [](const std::string& f) { return f.empty(); });
}

std::optional<std::size_t> parse_index(std::string_view s) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// Resolves a single selector (name or 1-based index) to a 0-based column.
std::size_t resolve_one(const std::string& sel, const std::vector<std::string>& header) {
  const auto it = std::find(header.begin(), header.end(), sel);
  if (it != header.end()) return static_cast<std::size_t>(it - header.begin());
  if (const auto idx = parse_index(sel); idx && *idx >= 1 && *idx <= header.size()) return *idx - 1;
  throw Error(ErrorKind::MissingColumn, "column not found: " + sel);
}

std::vector<std::size_t> resolve_features(const std::string& list, const std::vector<std::string>& header) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto end = std::min(list.find(',', start), list.size());
    const std::string item = trim(std::string_view(list).substr(start, end - start));
    start = end + 1;
    if (item.empty()) continue;
    const auto dash = item.find('-', 1);
    const bool is_name = std::find(header.begin(), header.end(), item) != header.end();
    if (!is_name && dash != std::string::npos) {
      const auto a = parse_index(trim(std::string_view(item).substr(0, dash)));
      const auto b = parse_index(trim(std::string_view(item).substr(dash + 1)));
      if (!a || !b || *a < 1 || *b < *a || *b > header.size()) {
        throw Error(ErrorKind::MissingColumn, "bad column range: " + item);
      }
      for (std::size_t c = *a; c <= *b; ++c) out.push_back(c - 1);
    } else {
      out.push_back(resolve_one(item, header));
    }
  }
  if (out.empty()) throw Error(ErrorKind::MissingColumn, "no feature columns selected");
  return out;
}

}  // namespace

LabeledDataset read_csv(std::istream& in, const CsvColumns& columns) {
  std::vector<std::string> header;
  std::size_t line_no = 0;
  if (!read_record(in, header, line_no)) throw Error(ErrorKind::EmptyDataset, "CSV has no header row");
  if (!header.empty() && header.front().rfind("\xEF\xBB\xBF", 0) == 0) header.front().erase(0, 3);

  const std::size_t label_col = resolve_one(columns.label, header);
  std::vector<std::size_t> feature_cols;
  if (columns.features) {
    feature_cols = resolve_features(*columns.features, header);
  } else {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c != label_col) feature_cols.push_back(c);
    }
  }
  if (std::find(feature_cols.begin(), feature_cols.end(), label_col) != feature_cols.end()) {
    throw Error(ErrorKind::InvalidArgument, "label column " + header[label_col] + " is also a feature");
  }

  LabeledDataset out;
  for (std::size_t c : feature_cols) out.column_names.push_back(header[c]);
  std::unordered_map<std::string, std::size_t> index;
  std::vector<double> values;
  std::vector<std::string> fields;
  std::size_t row = 0;
  while (read_record(in, fields, line_no)) {
    if (all_blank(fields)) continue;
    ++row;
    if (fields.size() != header.size()) {
      throw Error(ErrorKind::ParseError, "row " + std::to_string(row) + ": expected " +
                                             std::to_string(header.size()) + " fields, found " +
                                             std::to_string(fields.size()));
    }
    for (std::size_t c : feature_cols) {
      const std::string& f = fields[c];
      double v = 0.0;
      const char* first = f.data();
      if (!f.empty() && *first == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, f.data() + f.size(), v);
      if (f.empty() || ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(v)) {
        throw Error(ErrorKind::ParseError, "row " + std::to_string(row) + ", column " + header[c] +
                                               ": not a number: '" + f + "'");
      }
      values.push_back(v);
    }
    const std::string& label = fields[label_col];
    const auto [it, inserted] = index.emplace(label, out.class_table.size());
    if (inserted) out.class_table.push_back(label);
    out.labels.push_back(it->second);
  }
  if (out.labels.empty()) throw Error(ErrorKind::EmptyDataset, "CSV has no data rows");
  const auto n = static_cast<Eigen::Index>(out.labels.size());
  const auto p = static_cast<Eigen::Index>(feature_cols.size());
  out.features = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), n, p);
  return out;
}

LabeledDataset load_csv(const std::filesystem::path& path, const CsvColumns& columns) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  return read_csv(in, columns);
}

namespace {

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos && s == trim(s)) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

}  // namespace

void write_csv(std::ostream& out, const LabeledDataset& data, const std::string& label_name) {
  for (std::size_t j = 0; j < data.dim(); ++j) {
    out << quote_if_needed(j < data.column_names.size() ? data.column_names[j] : "x" + std::to_string(j + 1))
        << ',';
  }
  out << quote_if_needed(label_name) << '\n';
  char buf[64];
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t j = 0; j < data.dim(); ++j) {
      const auto res = std::to_chars(buf, buf + sizeof buf,
                                     data.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      out.write(buf, res.ptr - buf);
      out << ',';
    }
    out << quote_if_needed(data.class_table[data.labels[i]]) << '\n';
  }
}

std::vector<std::size_t> constant_columns(const LabeledDataset& data) {
  std::vector<std::size_t> out;
  if (data.size() == 0) return out;
  for (Eigen::Index j = 0; j < data.features.cols(); ++j) {
    const auto col = data.features.col(j);
    if ((col.array() == col(0)).all()) out.push_back(static_cast<std::size_t>(j));
  }
  return out;
}

void require_nonconstant(const LabeledDataset& data) {
  const auto cols = constant_columns(data);
  if (cols.empty()) return;
  const std::size_t c = cols.front();
  const std::string name = c < data.column_names.size() ? data.column_names[c] : std::to_string(c + 1);
  throw Error(ErrorKind::ConstantColumn, "column " + name + " is constant");
}

LabeledDataset drop_columns(const LabeledDataset& data, std::span<const std::size_t> columns) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < data.features.cols(); ++j) {
    if (std::find(columns.begin(), columns.end(), static_cast<std::size_t>(j)) == columns.end()) keep.push_back(j);
  }
  LabeledDataset out;
  out.features = data.features(Eigen::all, keep);
  out.labels = data.labels;
  out.class_table = data.class_table;
  for (Eigen::Index j : keep) {
    if (static_cast<std::size_t>(j) < data.column_names.size()) {
      out.column_names.push_back(data.column_names[static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

Split stratified_split(const LabeledDataset& data, double train_fraction, Rng& rng) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "train fraction must lie in (0, 1)");
  }
  const std::size_t p = data.dim();
  Split out;
  for (std::size_t k = 0; k < data.num_classes(); ++k) {
    std::vector<std::size_t> rows = data.rows_of_class(k);
    const std::size_t nk = rows.size();
    // The small offset keeps exact products such as 0.7 * 10 from flooring to 6.
    std::size_t ntrain = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(nk) + 1e-9));
    ntrain = std::max(ntrain, p + 2);
    if (ntrain >= nk) {
      throw Error(ErrorKind::ClassTooSmall, "class " + data.class_table[k] + " has " + std::to_string(nk) +
                                                " rows; needs " + std::to_string(p + 3) + " to split");
    }
    const auto picked = draw_distinct(rng, nk, ntrain);
    std::vector<char> in_train(nk, 0);
    for (std::size_t i : picked) in_train[i] = 1;
    for (std::size_t i = 0; i < nk; ++i) (in_train[i] ? out.train_rows : out.test_rows).push_back(rows[i]);
  }
  std::sort(out.train_rows.begin(), out.train_rows.end());
  std::sort(out.test_rows.begin(), out.test_rows.end());
  out.train = data.subset(out.train_rows);
  out.test = data.subset(out.test_rows);
  return out;
}

std::vector<std::size_t> flip_labels(LabeledDataset& data, double fraction, Rng& rng) {
  if (data.num_classes() < 2) throw Error(ErrorKind::InvalidArgument, "label flipping needs two classes");
  if (!(fraction >= 0.0 && fraction < 1.0)) throw Error(ErrorKind::InvalidArgument, "flip fraction must lie in [0, 1)");
  const auto count = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(data.size()) + 1e-9));
  auto rows = draw_distinct(rng, data.size(), count);
  boost::random::uniform_int_distribution<std::size_t> other(0, data.num_classes() - 2);
  for (std::size_t r : rows) {
    const std::size_t pick = other(rng);
    data.labels[r] = pick >= data.labels[r] ? pick + 1 : pick;
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

}  // namespace rgqda
