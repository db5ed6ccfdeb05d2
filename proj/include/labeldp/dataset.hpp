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

#ifndef LABELDP_DATASET_HPP
#define LABELDP_DATASET_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "labeldp/rng.hpp"

namespace labeldp {

// Probability vector over the K labels. Entries are nonnegative and sum to 1
// within 1e-9.
class DiscreteDistribution {
 public:
  explicit DiscreteDistribution(std::vector<double> probs);

  int size() const { return static_cast<int>(probs_.size()); }
  double operator[](int y) const { return probs_[static_cast<size_t>(y)]; }
  const std::vector<double>& probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

// Draw a label with probability probs[y] (CDF inversion on one uniform).
int sample_categorical(RngStream& rng, const DiscreteDistribution& dist);

// One Laplace(0, scale) draw; forwarder kept next to sample_categorical so
// the mechanism code reads uniformly.
double sample_laplace(RngStream& rng, double scale);

// Immutable labeled dataset: n examples, d features each, labels in [0, K).
// Content never changes after construction; instances are safe to share
// across threads.
class LabeledDataset {
 public:
  // features is row-major n*d. Throws if a label is outside [0, K) or the
  // feature buffer does not factor as n*d.
  LabeledDataset(std::vector<double> features, std::vector<int> labels,
                 int num_classes, int dim);

  int n() const { return static_cast<int>(labels_.size()); }
  int num_classes() const { return num_classes_; }
  int dim() const { return dim_; }
  int label(int i) const { return labels_[static_cast<size_t>(i)]; }
  const std::vector<int>& labels() const { return labels_; }
  std::span<const double> feature(int i) const {
    return {features_.data() + static_cast<size_t>(i) * dim_,
            static_cast<size_t>(dim_)};
  }
  const std::vector<double>& features() const { return features_; }

  // Same features, new labels (e.g. mechanism output).
  LabeledDataset with_labels(std::vector<int> labels) const;

  // Row subset in the given order (e.g. subsampled mechanism output).
  LabeledDataset subset(const std::vector<int>& rows) const;

 private:
  std::vector<double> features_;
  std::vector<int> labels_;
  int num_classes_;
  int dim_;
};

// CSV ingestion.
//
// Schema: header row with feature columns f0..f{d-1} (reals), a `label`
// column (ints in [0, K), or strings which get mapped to dense ids in
// lexicographic order), and an optional `cluster` column (ints). UTF-8,
// comma-separated. Unknown columns are rejected.
struct CsvSchema {
  // Expected label-space size; 0 means infer as max(label)+1.
  int num_classes = 0;
  // When false, feature columns are not parsed (privatization paths only
  // touch labels and clusters) and the resulting dataset has dim 0.
  bool parse_features = true;
};

struct CsvDataset {
  LabeledDataset data;
  std::optional<std::vector<int>> cluster_ids;
  // Non-empty iff the label column held strings; label_names[id] is the
  // original label for dense id `id`.
  std::vector<std::string> label_names;
};

CsvDataset load_csv(const std::string& path, const CsvSchema& schema = {});

// Writes the f0..f{d-1},label[,cluster] schema. Feature values are printed
// with 17 significant digits so a reload is bit-identical.
void write_csv(const std::string& path, const LabeledDataset& data,
               const std::vector<int>* cluster_ids = nullptr);

// Single-column cluster file (header `cluster`), aligned with input rows.
void write_cluster_csv(const std::string& path,
                       const std::vector<int>& cluster_ids);
std::vector<int> load_cluster_csv(const std::string& path);

// Streaming rewrite used by the privatization CLIs: copies `in_path` to
// `out_path` replacing the label column with new_labels[i] for every kept
// row; all other fields pass through byte-exact. keep[i] == false drops row
// i (empty keep means keep all). label_names maps dense ids back to the
// original string labels when the input column was non-numeric.
void rewrite_labels_csv(const std::string& in_path, const std::string& out_path,
                        const std::vector<int>& new_labels,
                        const std::vector<bool>& keep = {},
                        const std::vector<std::string>& label_names = {});

}  // namespace labeldp

#endif  // LABELDP_DATASET_HPP
