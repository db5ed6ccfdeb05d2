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

#include "labeldp/lap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace labeldp {

LapInstance generate_lap(int num_clusters, int labels_per_cluster,
                         int num_classes, const RngStream& rng) {
  if (num_clusters < 1) throw std::invalid_argument("generate_lap: need C >= 1");
  if (labels_per_cluster < 1 || labels_per_cluster > num_classes) {
    throw std::invalid_argument("generate_lap: need 1 <= s <= K");
  }
  if (labels_per_cluster == num_classes) {
    throw std::invalid_argument(
        "generate_lap: s = K leaves no label outside the cluster set; the "
        "neighbor perturbation is undefined");
  }
  LapInstance inst;
  inst.num_clusters = num_clusters;
  inst.labels_per_cluster = labels_per_cluster;
  inst.num_classes = num_classes;
  inst.truth.resize(static_cast<size_t>(num_clusters));

  // Partial Fisher-Yates per cluster: first s entries are a uniform draw
  // without replacement from [0, K).
  std::vector<int> pool(static_cast<size_t>(num_classes));
  for (int c = 0; c < num_clusters; ++c) {
    RngStream cluster_rng =
        rng.derive(rng_tag::kLapTruth, static_cast<uint64_t>(c));
    for (int y = 0; y < num_classes; ++y) pool[static_cast<size_t>(y)] = y;
    auto& set = inst.truth[static_cast<size_t>(c)];
    set.resize(static_cast<size_t>(labels_per_cluster));
    for (int j = 0; j < labels_per_cluster; ++j) {
      const int pick = j + static_cast<int>(cluster_rng.uniform_index(
                               static_cast<uint64_t>(num_classes - j)));
      std::swap(pool[static_cast<size_t>(j)], pool[static_cast<size_t>(pick)]);
      set[static_cast<size_t>(j)] = pool[static_cast<size_t>(j)];
    }
    std::sort(set.begin(), set.end());
  }

  // Neighbor: uniform example = uniform (cluster, member) since all cluster
  // sizes are exactly s; its label is redrawn from the complement.
  RngStream neighbor_rng = rng.derive(rng_tag::kLapNeighbor);
  inst.neighbor_cluster = static_cast<int>(
      neighbor_rng.uniform_index(static_cast<uint64_t>(num_clusters)));
  const auto& set = inst.truth[static_cast<size_t>(inst.neighbor_cluster)];
  inst.removed_label = set[neighbor_rng.uniform_index(set.size())];
  std::vector<int> complement;
  complement.reserve(static_cast<size_t>(num_classes - labels_per_cluster));
  for (int y = 0; y < num_classes; ++y) {
    if (!std::binary_search(set.begin(), set.end(), y)) complement.push_back(y);
  }
  inst.added_label = complement[neighbor_rng.uniform_index(complement.size())];
  return inst;
}

LapMechanismResult rr_membership_mechanism(const LapInstance& instance,
                                           double epsilon_total,
                                           const RngStream& rng) {
  if (!(epsilon_total > 0.0)) {
    throw std::invalid_argument("rr_membership_mechanism: epsilon must be > 0");
  }
  const double eps_bit = std::isinf(epsilon_total) ? kInfinity : epsilon_total / 2.0;
  // e^{eps}/(1+e^{eps}) in overflow-safe form.
  const double keep_prob = 1.0 / (1.0 + std::exp(-eps_bit));

  LapMechanismResult result;
  result.receipt.mechanism = "lap-rr";
  result.receipt.epsilon = epsilon_total;
  result.receipt.delta = 0.0;
  result.receipt.params = {{"epsilon_bit", eps_bit},
                           {"keep_prob", keep_prob},
                           // One label change flips the removed and the added
                           // membership bit, hence the group factor of two.
                           {"group_factor", 2.0}};

  for (int c = 0; c < instance.num_clusters; ++c) {
    RngStream bits = rng.derive(rng_tag::kLapBits, static_cast<uint64_t>(c));
    const auto& set = instance.truth[static_cast<size_t>(c)];
    for (int y = 0; y < instance.num_classes; ++y) {
      const bool truth_bit = std::binary_search(set.begin(), set.end(), y);
      const bool keep = bits.uniform() < keep_prob;
      const bool out_bit = keep ? truth_bit : !truth_bit;
      if (out_bit) result.output.pairs.emplace_back(c, y);
    }
  }
  return result;
}

HardnessVerdict check_hardness_bound(double precision, double recall,
                                     double epsilon, int s, int K,
                                     double std_error) {
  if (s >= K) {
    throw std::invalid_argument(
        "check_hardness_bound: bound s/(K-s) undefined for s >= K");
  }
  if (s < 1) throw std::invalid_argument("check_hardness_bound: need s >= 1");
  HardnessVerdict verdict;
  verdict.product = precision * recall * std::exp(-epsilon);
  verdict.bound = static_cast<double>(s) / static_cast<double>(K - s);
  verdict.margin = verdict.bound + 3.0 * std_error - verdict.product;
  verdict.pass = verdict.product <= verdict.bound + 3.0 * std_error;
  return verdict;
}

LapBenchPoint run_lap_bench(int num_clusters, int labels_per_cluster,
                            int num_classes, double epsilon, int trials,
                            const RngStream& rng, int batches) {
  if (trials < 1) throw std::invalid_argument("run_lap_bench: trials >= 1");
  if (batches < 1) batches = 1;
  batches = std::min(batches, trials);

  // Ratio-of-means estimator per the displayed precision formula: sums of
  // true positives and of output sizes across trials.
  double hits_total = 0.0;
  double output_total = 0.0;
  const double truth_total_per_trial =
      static_cast<double>(num_clusters) * labels_per_cluster;
  std::vector<double> batch_hits(static_cast<size_t>(batches), 0.0);
  std::vector<double> batch_output(static_cast<size_t>(batches), 0.0);
  std::vector<double> batch_trials(static_cast<size_t>(batches), 0.0);

  for (int t = 0; t < trials; ++t) {
    const RngStream trial_rng = rng.derive(rng_tag::kTrial, static_cast<uint64_t>(t));
    const LapInstance inst = generate_lap(num_clusters, labels_per_cluster,
                                          num_classes, trial_rng);
    const LapMechanismResult mech =
        rr_membership_mechanism(inst, epsilon, trial_rng);
    const PrecisionRecall pr = lap_precision_recall(inst.truth, mech.output.pairs);
    const double hits = pr.recall * truth_total_per_trial;
    hits_total += hits;
    output_total += static_cast<double>(mech.output.pairs.size());
    const int b = t % batches;
    batch_hits[static_cast<size_t>(b)] += hits;
    batch_output[static_cast<size_t>(b)] += static_cast<double>(mech.output.pairs.size());
    batch_trials[static_cast<size_t>(b)] += 1.0;
  }

  LapBenchPoint point;
  point.epsilon = epsilon;
  point.recall = hits_total / (truth_total_per_trial * trials);
  point.precision = output_total > 0.0 ? hits_total / output_total
                                       : std::numeric_limits<double>::quiet_NaN();
  point.product = point.precision * point.recall * std::exp(-epsilon);

  // Batch-means standard error of the product estimator.
  double mean = 0.0;
  double mean_sq = 0.0;
  int used = 0;
  for (int b = 0; b < batches; ++b) {
    if (batch_output[static_cast<size_t>(b)] <= 0.0 ||
        batch_trials[static_cast<size_t>(b)] <= 0.0) {
      continue;
    }
    const double prec = batch_hits[static_cast<size_t>(b)] /
                        batch_output[static_cast<size_t>(b)];
    const double rec = batch_hits[static_cast<size_t>(b)] /
                       (truth_total_per_trial * batch_trials[static_cast<size_t>(b)]);
    const double prod = prec * rec * std::exp(-epsilon);
    mean += prod;
    mean_sq += prod * prod;
    ++used;
  }
  if (used > 1) {
    mean /= used;
    const double var = std::max(0.0, mean_sq / used - mean * mean);
    point.std_error = std::sqrt(var / (used - 1));
  }
  point.verdict = check_hardness_bound(point.precision, point.recall, epsilon,
                                       labels_per_cluster, num_classes,
                                       point.std_error);
  return point;
}

}  // namespace labeldp
