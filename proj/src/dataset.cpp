// Copyright 2026 The LabelDP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "labeldp/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace labeldp {

namespace {

constexpr double kSumTolerance = 1e-9;

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

bool parse_int(const std::string& raw, long long& value) {
  const std::string s = trim(raw);
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

bool parse_double(const std::string& raw, double& value) {
  const std::string s = trim(raw);
  if (s.empty()) return false;
  char* end = nullptr;
  value = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(value);
}

std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<double> probs)
    : probs_(std::move(probs)) {
  if (probs_.empty()) {
    throw std::invalid_argument("DiscreteDistribution: empty vector");
  }
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw std::invalid_argument(
          "DiscreteDistribution: entries must be nonnegative and finite");
    }
    sum += p;
  }
  if (std::fabs(sum - 1.0) > kSumTolerance) {
    throw std::invalid_argument("DiscreteDistribution: sum " +
                                format_full(sum) + " is not 1 within 1e-9");
  }
}

int sample_categorical(RngStream& rng, const DiscreteDistribution& dist) {
  const double u = rng.uniform();
  double acc = 0.0;
  int last_positive = 0;
  for (int y = 0; y < dist.size(); ++y) {
    if (dist[y] > 0.0) last_positive = y;
    acc += dist[y];
    if (u < acc) return y;
  }
  // u landed past the accumulated mass by rounding; return the last label
  // that carries probability.
  return last_positive;
}

double sample_laplace(RngStream& rng, double scale) {
  return rng.laplace(scale);
}

LabeledDataset::LabeledDataset(std::vector<double> features,
                               std::vector<int> labels, int num_classes,
                               int dim)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      num_classes_(num_classes),
      dim_(dim) {
  if (num_classes_ < 1) {
    throw std::invalid_argument("LabeledDataset: num_classes must be >= 1");
  }
  if (dim_ < 0) throw std::invalid_argument("LabeledDataset: negative dim");
  if (features_.size() != labels_.size() * static_cast<size_t>(dim_)) {
    throw std::invalid_argument(
        "LabeledDataset: feature buffer does not factor as n*dim");
  }
  for (size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] < 0 || labels_[i] >= num_classes_) {
      throw std::invalid_argument("LabeledDataset: label " +
                                  std::to_string(labels_[i]) + " at row " +
                                  std::to_string(i) + " outside [0, " +
                                  std::to_string(num_classes_) + ")");
    }
  }
}

LabeledDataset LabeledDataset::with_labels(std::vector<int> labels) const {
  if (labels.size() != labels_.size()) {
    throw std::invalid_argument("with_labels: length mismatch");
  }
  return LabeledDataset(features_, std::move(labels), num_classes_, dim_);
}

LabeledDataset LabeledDataset::subset(const std::vector<int>& rows) const {
  std::vector<double> f;
  f.reserve(rows.size() * static_cast<size_t>(dim_));
  std::vector<int> l;
  l.reserve(rows.size());
  for (int r : rows) {
    if (r < 0 || r >= n()) throw std::invalid_argument("subset: row out of range");
    auto row = feature(r);
    f.insert(f.end(), row.begin(), row.end());
    l.push_back(labels_[static_cast<size_t>(r)]);
  }
  return LabeledDataset(std::move(f), std::move(l), num_classes_, dim_);
}

namespace {

struct CsvLayout {
  std::vector<int> feature_cols;  // column index of f0..f{d-1}
  int label_col = -1;
  int cluster_col = -1;
  int total_cols = 0;
};

CsvLayout parse_header(const std::string& path, const std::string& header) {
  CsvLayout layout;
  const auto names = split_csv_line(header);
  layout.total_cols = static_cast<int>(names.size());
  std::map<int, int> features;  // feature index -> column
  for (int col = 0; col < layout.total_cols; ++col) {
    const std::string name = trim(names[static_cast<size_t>(col)]);
    if (name == "label") {
      if (layout.label_col >= 0) {
        throw std::runtime_error(path + ": duplicate `label` column");
      }
      layout.label_col = col;
    } else if (name == "cluster") {
      if (layout.cluster_col >= 0) {
        throw std::runtime_error(path + ": duplicate `cluster` column");
      }
      layout.cluster_col = col;
    } else if (name.size() >= 2 && name[0] == 'f') {
      long long idx = 0;
      if (!parse_int(name.substr(1), idx) || idx < 0) {
        throw std::runtime_error(path + ": unknown column `" + name + "`");
      }
      if (features.count(static_cast<int>(idx))) {
        throw std::runtime_error(path + ": duplicate column `" + name + "`");
      }
      features[static_cast<int>(idx)] = col;
    } else {
      throw std::runtime_error(path + ": unknown column `" + name +
                               "` (expected f0..f{d-1}, label, cluster)");
    }
  }
  if (layout.label_col < 0) {
    throw std::runtime_error(path + ": missing required `label` column");
  }
  int expected = 0;
  for (const auto& [idx, col] : features) {
    if (idx != expected) {
      throw std::runtime_error(path + ": feature columns must be contiguous " +
                               "f0..f{d-1}; missing f" + std::to_string(expected));
    }
    layout.feature_cols.push_back(col);
    ++expected;
  }
  return layout;
}

}  // namespace

CsvDataset load_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open file");

  std::string header;
  if (!std::getline(in, header)) {
    throw std::runtime_error(path + ": empty file (expected header row)");
  }
  if (!header.empty() && header.back() == '\r') header.pop_back();
  const CsvLayout layout = parse_header(path, header);
  const int d = static_cast<int>(layout.feature_cols.size());

  std::vector<double> features;
  std::vector<long long> raw_int_labels;
  std::vector<std::string> raw_str_labels;
  bool labels_numeric = true;
  std::vector<int> clusters;
  std::string line;
  size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    ++row;
    const auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != layout.total_cols) {
      throw std::runtime_error(path + ": row " + std::to_string(row) + " has " +
                               std::to_string(fields.size()) + " fields, expected " +
                               std::to_string(layout.total_cols));
    }
    if (schema.parse_features) {
      for (int col : layout.feature_cols) {
        double v = 0.0;
        if (!parse_double(fields[static_cast<size_t>(col)], v)) {
          throw std::runtime_error(path + ": row " + std::to_string(row) +
                                   ": non-numeric feature value `" +
                                   trim(fields[static_cast<size_t>(col)]) + "`");
        }
        features.push_back(v);
      }
    }
    const std::string label_raw = trim(fields[static_cast<size_t>(layout.label_col)]);
    long long label_int = 0;
    if (labels_numeric && parse_int(label_raw, label_int)) {
      raw_int_labels.push_back(label_int);
    } else {
      labels_numeric = false;
    }
    raw_str_labels.push_back(label_raw);
    if (layout.cluster_col >= 0) {
      long long c = 0;
      if (!parse_int(fields[static_cast<size_t>(layout.cluster_col)], c) || c < 0) {
        throw std::runtime_error(path + ": row " + std::to_string(row) +
                                 ": cluster id must be a nonnegative integer");
      }
      clusters.push_back(static_cast<int>(c));
    }
  }
  if (row == 0) {
    throw std::runtime_error(path + ": empty dataset (no data rows)");
  }

  std::vector<int> labels(row);
  std::vector<std::string> label_names;
  int num_classes = schema.num_classes;
  if (labels_numeric) {
    long long max_label = 0;
    for (size_t i = 0; i < row; ++i) {
      const long long v = raw_int_labels[i];
      if (v < 0) {
        throw std::runtime_error(path + ": label " + std::to_string(v) +
                                 " out of range (labels are dense ints >= 0)");
      }
      max_label = std::max(max_label, v);
      labels[i] = static_cast<int>(v);
    }
    if (num_classes == 0) num_classes = static_cast<int>(max_label) + 1;
    if (max_label >= num_classes) {
      throw std::runtime_error(path + ": label " + std::to_string(max_label) +
                               " out of range for declared K=" +
                               std::to_string(num_classes));
    }
  } else {
    // String labels: dense ids in lexicographic order, mapping returned to
    // the caller for the output manifest.
    std::map<std::string, int> ids;
    for (const auto& s : raw_str_labels) ids.emplace(s, 0);
    int next = 0;
    for (auto& [name, id] : ids) {
      id = next++;
      label_names.push_back(name);
    }
    if (num_classes == 0) num_classes = next;
    if (next > num_classes) {
      throw std::runtime_error(path + ": " + std::to_string(next) +
                               " distinct labels out of range for declared K=" +
                               std::to_string(num_classes));
    }
    for (size_t i = 0; i < row; ++i) labels[i] = ids[raw_str_labels[i]];
  }

  CsvDataset out{
      LabeledDataset(std::move(features), std::move(labels), num_classes,
                     schema.parse_features ? d : 0),
      std::nullopt, std::move(label_names)};
  if (layout.cluster_col >= 0) out.cluster_ids = std::move(clusters);
  return out;
}

void write_csv(const std::string& path, const LabeledDataset& data,
               const std::vector<int>* cluster_ids) {
  if (cluster_ids && static_cast<int>(cluster_ids->size()) != data.n()) {
    throw std::invalid_argument("write_csv: cluster column length mismatch");
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  for (int j = 0; j < data.dim(); ++j) {
    out << 'f' << j << ',';
  }
  out << "label";
  if (cluster_ids) out << ",cluster";
  out << '\n';
  for (int i = 0; i < data.n(); ++i) {
    const auto row = data.feature(i);
    for (double v : row) out << format_full(v) << ',';
    out << data.label(i);
    if (cluster_ids) out << ',' << (*cluster_ids)[static_cast<size_t>(i)];
    out << '\n';
  }
}

void write_cluster_csv(const std::string& path,
                       const std::vector<int>& cluster_ids) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "cluster\n";
  for (int c : cluster_ids) out << c << '\n';
}

std::vector<int> load_cluster_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error(path + ": empty cluster file");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (trim(line) != "cluster") {
    throw std::runtime_error(path + ": expected header `cluster`");
  }
  std::vector<int> out;
  size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    ++row;
    long long c = 0;
    if (!parse_int(line, c) || c < 0) {
      throw std::runtime_error(path + ": row " + std::to_string(row) +
                               ": cluster id must be a nonnegative integer");
    }
    out.push_back(static_cast<int>(c));
  }
  return out;
}

void rewrite_labels_csv(const std::string& in_path, const std::string& out_path,
                        const std::vector<int>& new_labels,
                        const std::vector<bool>& keep,
                        const std::vector<std::string>& label_names) {
  std::ifstream in(in_path);
  if (!in) throw std::runtime_error(in_path + ": cannot open file");
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error(out_path + ": cannot open for writing");

  std::string header;
  if (!std::getline(in, header)) {
    throw std::runtime_error(in_path + ": empty file (expected header row)");
  }
  std::string header_clean = header;
  if (!header_clean.empty() && header_clean.back() == '\r') header_clean.pop_back();
  const CsvLayout layout = parse_header(in_path, header_clean);
  out << header_clean << '\n';

  std::string line;
  size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (row >= new_labels.size()) {
      throw std::invalid_argument(in_path +
                                  ": more data rows than replacement labels");
    }
    if (!keep.empty() && !keep[row]) {
      ++row;
      continue;
    }
    auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != layout.total_cols) {
      throw std::runtime_error(in_path + ": row " + std::to_string(row + 1) +
                               " has inconsistent field count");
    }
    const int id = new_labels[row];
    fields[static_cast<size_t>(layout.label_col)] =
        label_names.empty() ? std::to_string(id)
                            : label_names.at(static_cast<size_t>(id));
    for (size_t i = 0; i < fields.size(); ++i) {
      if (i) out << ',';
      out << fields[i];
    }
    out << '\n';
    ++row;
  }
  if (row != new_labels.size()) {
    throw std::invalid_argument(in_path + ": replacement label count " +
                                std::to_string(new_labels.size()) +
                                " does not match data rows " +
                                std::to_string(row));
  }
}

}  // namespace labeldp
