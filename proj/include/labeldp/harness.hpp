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

#ifndef LABELDP_HARNESS_HPP
#define LABELDP_HARNESS_HPP

#include <string>
#include <vector>

#include "labeldp/learner.hpp"
#include "labeldp/privacy.hpp"

namespace labeldp {

enum class SweepMechanism { kUniformRR, kClusterRR };

std::string mechanism_name(SweepMechanism m);

// Privacy/utility sweep: for each (cluster count, mechanism, epsilon, trial)
// cluster the training set, privatize, train on the noisy labels (with the
// debiasing matrices when beta > 0), and score on the clean test set.
// Accuracies are also reported normalized by a clean-trained baseline.
struct SweepConfig {
  std::string train_path;
  std::string test_path;
  std::vector<int> cluster_counts;
  std::vector<double> epsilons;  // kInfinity allowed (non-private baseline)
  std::vector<SweepMechanism> mechanisms;
  int trials = 5;
  std::uint64_t seed = 0;
  // Heterogeneity fed to the cluster preset: a fixed value, or (when
  // use_phi_proxy) the one-hot proxy measured on the clustering, clamped
  // into (phi_floor, 1/K].
  double phi = 0.05;
  bool use_phi_proxy = false;
  double phi_floor = 1e-4;
  int num_classes = 0;  // 0 = infer from the training file
  TrainOptions hyperparams;
  KMeansOptions kmeans;
  std::string out_dir;  // empty = no files; set = flush per grid point
};

// Strict JSON loader for the schema documented in the README; unknown keys
// are rejected.
SweepConfig parse_sweep_config(const std::string& json_text);
SweepConfig load_sweep_config(const std::string& path);

struct SweepRow {
  std::string mechanism;
  int clusters = 0;
  double epsilon_target = 0.0;
  int trial = 0;
  double accuracy = 0.0;
  double normalized_accuracy = 0.0;
  double phi_used = 0.0;   // heterogeneity handed to the preset (cluster arm)
  double phi_proxy = 0.0;  // measured one-hot proxy for this clustering
  int min_cluster_size = 0;
  double runtime_sec = 0.0;
  PrivacyReceipt receipt;
};

struct SweepResult {
  double baseline_accuracy = 0.0;  // clean-trained, computed once and shared
  std::vector<SweepRow> rows;
};

SweepResult run_sweep(const SweepConfig& config);

// tidy.csv (one row per trial), agg.csv (mean/std per grid point) and
// receipts.jsonl under `dir`. Deterministic bytes; errors on empty results.
void emit_plotdata(const SweepResult& result, const std::string& dir);

}  // namespace labeldp

#endif  // LABELDP_HARNESS_HPP
