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

#ifndef LABELDP_METRICS_HPP
#define LABELDP_METRICS_HPP

#include <utility>
#include <vector>

#include "labeldp/clustering.hpp"
#include "labeldp/dataset.hpp"
#include "labeldp/rng.hpp"

namespace labeldp {

// Total variation in the un-halved sum_y |a_y - b_y| convention used
// throughout: symmetric, in [0, 2], zero iff equal.
double tv_distance(const DiscreteDistribution& a, const DiscreteDistribution& b);
double tv_distance(std::span<const double> a, std::span<const double> b);

// Synthetic label model: true conditionals p(y|x) per example with marginal
// example weights, plus per-cluster conditionals p(y|c). Real data never has
// p(y|x); this type exists for exact heterogeneity computations on
// constructed instances.
class ConditionalLabelModel {
 public:
  ConditionalLabelModel(std::vector<DiscreteDistribution> p_given_x,
                        std::vector<double> marginal,
                        std::vector<DiscreteDistribution> p_given_c);

  // Derives p(y|c) as the marginal-weighted average of p(y|x) over each
  // cluster, the consistent construction.
  static ConditionalLabelModel from_examples(
      std::vector<DiscreteDistribution> p_given_x, std::vector<double> marginal,
      const ClusterAssignment& assign);

  int n() const { return static_cast<int>(p_given_x_.size()); }
  const DiscreteDistribution& p_given_x(int i) const {
    return p_given_x_[static_cast<size_t>(i)];
  }
  const DiscreteDistribution& p_given_c(int c) const {
    return p_given_c_[static_cast<size_t>(c)];
  }
  double weight(int i) const { return marginal_[static_cast<size_t>(i)]; }

 private:
  std::vector<DiscreteDistribution> p_given_x_;
  std::vector<double> marginal_;
  std::vector<DiscreteDistribution> p_given_c_;
};

struct HeterogeneityReport {
  double phi = 0.0;                   // in [0, 2]
  std::vector<double> per_cluster_tv;  // weighted mean TV within each cluster
};

// Cluster heterogeneity phi = E_X[ sum_y |p(y|X) - p(y|c_X)| ], computed
// exactly over the finite example set.
HeterogeneityReport heterogeneity(const ConditionalLabelModel& model,
                                  const ClusterAssignment& assign);

// One-hot-vs-cluster stand-in for phi on real data, where p(y|x) is
// unobservable: mean over examples of sum_y |1{y_i=y} - p_hat(y|c_i)|. An
// upper-bound-style proxy, not phi itself; callers may override.
double empirical_heterogeneity_proxy(const LabeledDataset& data,
                                     const ClusterAssignment& assign);

// Same proxy split per cluster (mean of the per-example terms inside each
// cluster); emitted by the metrics CLI.
std::vector<double> per_cluster_proxy_tv(const LabeledDataset& data,
                                         const ClusterAssignment& assign);

struct DistortionEstimate {
  double psi = 0.0;        // max over clusters of the mean TV across trials
  double std_error = 0.0;  // Monte Carlo SE of the mean at the argmax cluster
  int argmax_cluster = 0;
};

// Monte Carlo estimate of the cluster distortion
// psi = max_c E[ sum_y |q_tilde(y|c) - p_hat(y|c)| ] for the central
// mechanism's distribution stage at (tau, sigma) on this dataset.
DistortionEstimate empirical_distortion(const LabeledDataset& data,
                                        const ClusterAssignment& assign,
                                        double tau, double sigma, int trials,
                                        const RngStream& rng);

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  // False when the output set is empty: precision is 0/0 and reported as
  // NaN with this flag cleared instead of being invented.
  bool precision_defined = true;
};

// Label-association precision/recall over (cluster, label) pair sets:
// precision = |output ∩ truth| / |output|, recall = |output ∩ truth| /
// sum_c |truth_c|.
PrecisionRecall lap_precision_recall(
    const std::vector<std::vector<int>>& truth_sets,
    const std::vector<std::pair<int, int>>& output_pairs);

}  // namespace labeldp

#endif  // LABELDP_METRICS_HPP
