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

#include "labeldp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

#include "labeldp/central.hpp"

namespace labeldp {

double tv_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("tv_distance: length mismatch");
  }
  double tv = 0.0;
  for (size_t y = 0; y < a.size(); ++y) tv += std::fabs(a[y] - b[y]);
  return tv;
}

double tv_distance(const DiscreteDistribution& a, const DiscreteDistribution& b) {
  return tv_distance(std::span<const double>(a.probs()),
                     std::span<const double>(b.probs()));
}

ConditionalLabelModel::ConditionalLabelModel(
    std::vector<DiscreteDistribution> p_given_x, std::vector<double> marginal,
    std::vector<DiscreteDistribution> p_given_c)
    : p_given_x_(std::move(p_given_x)),
      marginal_(std::move(marginal)),
      p_given_c_(std::move(p_given_c)) {
  if (p_given_x_.empty() || p_given_c_.empty()) {
    throw std::invalid_argument("ConditionalLabelModel: empty distributions");
  }
  if (marginal_.size() != p_given_x_.size()) {
    throw std::invalid_argument("ConditionalLabelModel: marginal length mismatch");
  }
  double sum = 0.0;
  for (double w : marginal_) {
    if (!(w >= 0.0)) {
      throw std::invalid_argument("ConditionalLabelModel: negative weight");
    }
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("ConditionalLabelModel: weights must sum to 1");
  }
}

ConditionalLabelModel ConditionalLabelModel::from_examples(
    std::vector<DiscreteDistribution> p_given_x, std::vector<double> marginal,
    const ClusterAssignment& assign) {
  if (static_cast<int>(p_given_x.size()) != assign.n()) {
    throw std::invalid_argument("from_examples: assignment length mismatch");
  }
  const int k = p_given_x.front().size();
  std::vector<std::vector<double>> acc(
      static_cast<size_t>(assign.num_clusters),
      std::vector<double>(static_cast<size_t>(k), 0.0));
  std::vector<double> cluster_weight(static_cast<size_t>(assign.num_clusters), 0.0);
  for (int i = 0; i < assign.n(); ++i) {
    const int c = assign.cluster_of[static_cast<size_t>(i)];
    const double w = marginal[static_cast<size_t>(i)];
    cluster_weight[static_cast<size_t>(c)] += w;
    for (int y = 0; y < k; ++y) {
      acc[static_cast<size_t>(c)][static_cast<size_t>(y)] +=
          w * p_given_x[static_cast<size_t>(i)][y];
    }
  }
  std::vector<DiscreteDistribution> p_given_c;
  p_given_c.reserve(acc.size());
  for (int c = 0; c < assign.num_clusters; ++c) {
    if (!(cluster_weight[static_cast<size_t>(c)] > 0.0)) {
      throw std::invalid_argument("from_examples: cluster " + std::to_string(c) +
                                  " has zero marginal weight");
    }
    std::vector<double> row = acc[static_cast<size_t>(c)];
    for (double& v : row) v /= cluster_weight[static_cast<size_t>(c)];
    p_given_c.emplace_back(std::move(row));
  }
  return ConditionalLabelModel(std::move(p_given_x), std::move(marginal),
                               std::move(p_given_c));
}

HeterogeneityReport heterogeneity(const ConditionalLabelModel& model,
                                  const ClusterAssignment& assign) {
  if (model.n() != assign.n()) {
    throw std::invalid_argument("heterogeneity: assignment length mismatch");
  }
  HeterogeneityReport report;
  report.per_cluster_tv.assign(static_cast<size_t>(assign.num_clusters), 0.0);
  std::vector<double> cluster_weight(static_cast<size_t>(assign.num_clusters), 0.0);
  for (int i = 0; i < model.n(); ++i) {
    const int c = assign.cluster_of[static_cast<size_t>(i)];
    const double tv = tv_distance(model.p_given_x(i), model.p_given_c(c));
    const double w = model.weight(i);
    report.phi += w * tv;
    report.per_cluster_tv[static_cast<size_t>(c)] += w * tv;
    cluster_weight[static_cast<size_t>(c)] += w;
  }
  for (int c = 0; c < assign.num_clusters; ++c) {
    if (cluster_weight[static_cast<size_t>(c)] > 0.0) {
      report.per_cluster_tv[static_cast<size_t>(c)] /=
          cluster_weight[static_cast<size_t>(c)];
    }
  }
  return report;
}

namespace {

// Shared accumulation for the one-hot proxy: per-example TV between the
// label indicator and the empirical cluster distribution.
std::vector<double> proxy_terms(const LabeledDataset& data,
                                const ClusterAssignment& assign) {
  if (assign.n() != data.n()) {
    throw std::invalid_argument("heterogeneity proxy: assignment length mismatch");
  }
  const int k = data.num_classes();
  std::vector<double> p_hat(
      static_cast<size_t>(assign.num_clusters) * k, 0.0);
  for (int c = 0; c < assign.num_clusters; ++c) {
    if (assign.sizes[static_cast<size_t>(c)] == 0) {
      throw std::invalid_argument("heterogeneity proxy: cluster " +
                                  std::to_string(c) + " is empty");
    }
  }
  for (int i = 0; i < data.n(); ++i) {
    const int c = assign.cluster_of[static_cast<size_t>(i)];
    p_hat[static_cast<size_t>(c) * k + data.label(i)] += 1.0;
  }
  for (int c = 0; c < assign.num_clusters; ++c) {
    for (int y = 0; y < k; ++y) {
      p_hat[static_cast<size_t>(c) * k + y] /= assign.sizes[static_cast<size_t>(c)];
    }
  }
  std::vector<double> terms(static_cast<size_t>(data.n()));
  for (int i = 0; i < data.n(); ++i) {
    const int c = assign.cluster_of[static_cast<size_t>(i)];
    double tv = 0.0;
    for (int y = 0; y < k; ++y) {
      const double one_hot = y == data.label(i) ? 1.0 : 0.0;
      tv += std::fabs(one_hot - p_hat[static_cast<size_t>(c) * k + y]);
    }
    terms[static_cast<size_t>(i)] = tv;
  }
  return terms;
}

}  // namespace

double empirical_heterogeneity_proxy(const LabeledDataset& data,
                                     const ClusterAssignment& assign) {
  const std::vector<double> terms = proxy_terms(data, assign);
  double sum = 0.0;
  for (double t : terms) sum += t;
  return sum / static_cast<double>(terms.size());
}

std::vector<double> per_cluster_proxy_tv(const LabeledDataset& data,
                                         const ClusterAssignment& assign) {
  const std::vector<double> terms = proxy_terms(data, assign);
  std::vector<double> out(static_cast<size_t>(assign.num_clusters), 0.0);
  for (int i = 0; i < data.n(); ++i) {
    out[static_cast<size_t>(assign.cluster_of[static_cast<size_t>(i)])] +=
        terms[static_cast<size_t>(i)];
  }
  for (int c = 0; c < assign.num_clusters; ++c) {
    out[static_cast<size_t>(c)] /= assign.sizes[static_cast<size_t>(c)];
  }
  return out;
}

DistortionEstimate empirical_distortion(const LabeledDataset& data,
                                        const ClusterAssignment& assign,
                                        double tau, double sigma, int trials,
                                        const RngStream& rng) {
  if (trials < 1) {
    throw std::invalid_argument("empirical_distortion: trials must be >= 1");
  }
  const int c_count = assign.num_clusters;
  std::vector<double> sum(static_cast<size_t>(c_count), 0.0);
  std::vector<double> sum_sq(static_cast<size_t>(c_count), 0.0);
  for (int t = 0; t < trials; ++t) {
    const RngStream trial_rng = rng.derive(rng_tag::kTrial, static_cast<uint64_t>(t));
    const ClusterLabelDistributions dists =
        noisy_distributions(data, assign, tau, sigma, trial_rng);
    for (int c = 0; c < c_count; ++c) {
      const double tv = tv_distance(dists.q_tilde_row(c), dists.q_hat_row(c));
      sum[static_cast<size_t>(c)] += tv;
      sum_sq[static_cast<size_t>(c)] += tv * tv;
    }
  }
  DistortionEstimate est;
  est.psi = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < c_count; ++c) {
    const double mean = sum[static_cast<size_t>(c)] / trials;
    if (mean > est.psi) {
      est.psi = mean;
      est.argmax_cluster = c;
      const double var =
          std::max(0.0, sum_sq[static_cast<size_t>(c)] / trials - mean * mean);
      est.std_error = trials > 1 ? std::sqrt(var / (trials - 1)) : 0.0;
    }
  }
  return est;
}

PrecisionRecall lap_precision_recall(
    const std::vector<std::vector<int>>& truth_sets,
    const std::vector<std::pair<int, int>>& output_pairs) {
  if (truth_sets.empty()) {
    throw std::invalid_argument("lap_precision_recall: empty truth");
  }
  std::set<std::pair<int, int>> truth;
  size_t truth_total = 0;
  for (int c = 0; c < static_cast<int>(truth_sets.size()); ++c) {
    for (int y : truth_sets[static_cast<size_t>(c)]) {
      truth.emplace(c, y);
      ++truth_total;
    }
  }
  if (truth_total == 0) {
    throw std::invalid_argument("lap_precision_recall: empty truth");
  }
  const std::set<std::pair<int, int>> output(output_pairs.begin(),
                                             output_pairs.end());
  size_t hits = 0;
  for (const auto& pair : output) hits += truth.count(pair);

  PrecisionRecall pr;
  pr.recall = static_cast<double>(hits) / static_cast<double>(truth_total);
  if (output.empty()) {
    pr.precision = std::numeric_limits<double>::quiet_NaN();
    pr.precision_defined = false;
  } else {
    pr.precision = static_cast<double>(hits) / static_cast<double>(output.size());
  }
  return pr;
}

}  // namespace labeldp
