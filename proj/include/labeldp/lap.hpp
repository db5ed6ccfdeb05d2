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

#ifndef LABELDP_LAP_HPP
#define LABELDP_LAP_HPP

#include <utility>
#include <vector>

#include "labeldp/metrics.hpp"
#include "labeldp/privacy.hpp"
#include "labeldp/rng.hpp"

namespace labeldp {

// Label Association Problem instance: C clusters, each holding s distinct
// labels out of K, plus the label-neighbor perturbation (one cluster swaps
// one label for one it did not hold).
struct LapInstance {
  int num_clusters = 0;  // C
  int labels_per_cluster = 0;  // s
  int num_classes = 0;   // K
  std::vector<std::vector<int>> truth;  // truth[c]: sorted, s distinct labels
  int neighbor_cluster = 0;
  int removed_label = 0;
  int added_label = 0;  // never in truth[neighbor_cluster]
};

struct LapOutput {
  std::vector<std::pair<int, int>> pairs;  // (cluster, label)
};

// Truth sets drawn uniformly without replacement per cluster; the neighbor
// redraws one uniformly chosen label from the K - s labels the cluster does
// not hold. Throws when s > K, and when s = K (no label left to swap in).
LapInstance generate_lap(int num_clusters, int labels_per_cluster,
                         int num_classes, const RngStream& rng);

// Baseline epsilon-label-DP mechanism for LAP: the C*K membership bits each
// go through binary randomized response at eps_bit = eps_total/2 (one label
// change flips exactly two bits, so group privacy composes the two per-bit
// guarantees to eps_total). Keep-bit probability e^{eps_bit}/(1+e^{eps_bit}).
struct LapMechanismResult {
  LapOutput output;
  PrivacyReceipt receipt;
};

LapMechanismResult rr_membership_mechanism(const LapInstance& instance,
                                           double epsilon_total,
                                           const RngStream& rng);

// Empirical check of the hardness direction phi * eta * e^{-eps} <=
// s/(K - s): passes when the measured product stays within three standard
// errors of the bound. Errors for s >= K (the bound divides by K - s).
struct HardnessVerdict {
  bool pass = false;
  double product = 0.0;  // phi * eta * e^{-eps}
  double bound = 0.0;    // s / (K - s)
  double margin = 0.0;   // bound + 3*stderr - product
};

HardnessVerdict check_hardness_bound(double precision, double recall,
                                     double epsilon, int s, int K,
                                     double std_error);

// Monte Carlo driver: `trials` independent mechanism draws on fresh
// instances, precision as ratio of means (matching the displayed formula),
// standard error of the product via batch means.
struct LapBenchPoint {
  double epsilon = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double product = 0.0;
  double std_error = 0.0;
  HardnessVerdict verdict;
};

LapBenchPoint run_lap_bench(int num_clusters, int labels_per_cluster,
                            int num_classes, double epsilon, int trials,
                            const RngStream& rng, int batches = 100);

}  // namespace labeldp

#endif  // LABELDP_LAP_HPP
