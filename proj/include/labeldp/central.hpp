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

#ifndef LABELDP_CENTRAL_HPP
#define LABELDP_CENTRAL_HPP

#include <span>
#include <vector>

#include "labeldp/clustering.hpp"
#include "labeldp/dataset.hpp"
#include "labeldp/linalg.hpp"
#include "labeldp/privacy.hpp"
#include "labeldp/rng.hpp"

namespace labeldp {

// Centralized cluster-based randomized response.
//
// Pipeline per cluster c:
//   1. empirical label distribution p_hat(y|c);
//   2. q(y|c) = clamp(p_hat + Laplace(sigma / n_c), tau, 1);
//   3. renormalize q into a distribution q_tilde with entries still in
//      [tau, 1];
// then per example: keep the label with probability 1 - lambda, otherwise
// resample from q_tilde(.|c). The K x K randomization matrices
// Q = (1-beta) I + beta q_tilde 1^T and their inverses debias the training
// loss downstream.
struct CentralParams {
  double tau = 0.0;     // clip threshold, in [0, 1/K]
  double sigma = 0.0;   // Laplace scale; kInfinity forces uniform q_tilde
  double lambda = 0.0;  // resampling probability, in [0, 1)
  double beta = 0.0;    // bias-correction parameter, in [0, 1)
};

// Validates ranges that do not need K; tau <= 1/K is checked where K is
// known (noisy_distributions / run_central / presets).
void validate_params(const CentralParams& params);

struct ClusterLabelDistributions {
  int num_clusters = 0;
  int num_classes = 0;
  std::vector<double> q_hat;    // C x K empirical p_hat(y|c), row-major
  std::vector<double> q_tilde;  // C x K post clip + renormalize

  std::span<const double> q_hat_row(int c) const {
    return {q_hat.data() + static_cast<size_t>(c) * num_classes,
            static_cast<size_t>(num_classes)};
  }
  std::span<const double> q_tilde_row(int c) const {
    return {q_tilde.data() + static_cast<size_t>(c) * num_classes,
            static_cast<size_t>(num_classes)};
  }
};

// Label randomization matrix for one cluster plus its inverse.
// Q[y', y] = (1-beta) 1{y'=y} + beta q_tilde(y'|c); Q depends on the example
// only through its cluster, so one matrix per cluster suffices.
struct RandomizationMatrix {
  SquareMatrix q;
  SquareMatrix q_inv;
  double beta = 0.0;
};

struct MechanismOutput {
  LabeledDataset noisy_data;
  std::vector<RandomizationMatrix> per_cluster_qinv;
  PrivacyReceipt receipt;
};

// Renormalization step: inputs already clipped to [tau, 1], output is a
// distribution whose entries stay in [tau, 1]. deficit = 1 - sum(q); each
// entry moves by its headroom share of the deficit.
std::vector<double> renormalize(std::span<const double> q_clipped, double tau);

// Stage 1 of the mechanism (noise + clip + renormalize). sigma == kInfinity
// bypasses sampling and sets q_tilde uniform, the exact limit of unbounded
// noise under tau = 1/K. Throws on an empty cluster or tau > 1/K.
ClusterLabelDistributions noisy_distributions(const LabeledDataset& data,
                                              const ClusterAssignment& assign,
                                              double tau, double sigma,
                                              const RngStream& rng);

// Stage 2: per-example keep/resample. Uses a derived stream per example, so
// the result does not depend on iteration order.
std::vector<int> randomize_labels(const LabeledDataset& data,
                                  const ClusterAssignment& assign,
                                  const ClusterLabelDistributions& dists,
                                  double lambda, const RngStream& rng);

// Stage 3: per-cluster randomization matrices and inverses.
std::vector<RandomizationMatrix> build_qinv(
    const ClusterLabelDistributions& dists, double beta);

// epsilon = 1/sigma + log(1 + (1-lambda)/(lambda tau)); delta = 0.
// lambda = 0 or tau = 0 give an infinite-epsilon receipt rather than an
// error (sweeps include non-private baselines).
PrivacyReceipt central_epsilon(const CentralParams& params);

// Uniform randomized response preset: tau = 1/K, beta = lambda =
// K/(K-1+e^eps), sigma = inf. Satisfies exactly eps-label-DP.
CentralParams preset_uniform_rr(double epsilon_target, int num_classes);

// Cluster-based preset: tau = phi, beta = 0, lambda = 1/(1+(e^eps-1) phi),
// sigma = 1/eps. phi must be in (0, 1/K]; the receipt reports the exact
// accountant value (2*eps for these parameters), not the target.
CentralParams preset_cluster_rr(double epsilon_target, double phi,
                                int num_classes);

// Full mechanism run: distributions, label resampling, matrices, receipt.
MechanismOutput run_central(const LabeledDataset& data,
                            const ClusterAssignment& assign,
                            const CentralParams& params, const RngStream& rng);

}  // namespace labeldp

#endif  // LABELDP_CENTRAL_HPP
