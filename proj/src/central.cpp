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

#include "labeldp/central.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace labeldp {

namespace {
constexpr double kLambdaCap = 1.0 - 1e-9;
}

void validate_params(const CentralParams& params) {
  if (!(params.tau >= 0.0) || params.tau > 1.0) {
    throw std::invalid_argument("central: tau must be in [0, 1/K]");
  }
  if (std::isnan(params.sigma) || params.sigma < 0.0) {
    throw std::invalid_argument("central: sigma must be >= 0 (or inf)");
  }
  if (!(params.lambda >= 0.0) || params.lambda >= 1.0) {
    throw std::invalid_argument("central: lambda must be in [0, 1)");
  }
  if (!(params.beta >= 0.0) || params.beta >= 1.0) {
    throw std::invalid_argument("central: beta must be in [0, 1)");
  }
}

std::vector<double> renormalize(std::span<const double> q_clipped, double tau) {
  const int k = static_cast<int>(q_clipped.size());
  if (k < 1) throw std::invalid_argument("renormalize: empty input");
  if (!(tau >= 0.0) || tau * k > 1.0 + 1e-12) {
    throw std::invalid_argument("renormalize: need 0 <= tau*K <= 1");
  }
  for (double v : q_clipped) {
    if (!(v >= tau - 1e-12) || !(v <= 1.0 + 1e-12)) {
      throw std::invalid_argument("renormalize: input entry outside [tau, 1]");
    }
  }

  double sum = 0.0;
  for (double v : q_clipped) sum += v;
  const double deficit = 1.0 - sum;

  std::vector<double> out(q_clipped.begin(), q_clipped.end());
  // Headroom weights: distance to the binding bound on the side the
  // correction moves toward.
  std::vector<double> headroom(static_cast<size_t>(k));
  double headroom_sum = 0.0;
  for (int y = 0; y < k; ++y) {
    headroom[static_cast<size_t>(y)] =
        deficit < 0.0 ? out[static_cast<size_t>(y)] - tau
                      : 1.0 - out[static_cast<size_t>(y)];
    headroom_sum += headroom[static_cast<size_t>(y)];
  }
  // headroom_sum = 0 forces deficit = 0 (all entries pinned); skip the
  // correction to avoid 0/0.
  if (deficit == 0.0 || headroom_sum <= 0.0) return out;
  for (int y = 0; y < k; ++y) {
    out[static_cast<size_t>(y)] +=
        headroom[static_cast<size_t>(y)] / headroom_sum * deficit;
  }
  return out;
}

ClusterLabelDistributions noisy_distributions(const LabeledDataset& data,
                                              const ClusterAssignment& assign,
                                              double tau, double sigma,
                                              const RngStream& rng) {
  if (assign.n() != data.n()) {
    throw std::invalid_argument("noisy_distributions: assignment length mismatch");
  }
  const int k = data.num_classes();
  if (!(tau >= 0.0) || tau > 1.0 / k + 1e-15) {
    throw std::invalid_argument("noisy_distributions: tau must be in [0, 1/K]");
  }
  if (std::isnan(sigma) || sigma < 0.0) {
    throw std::invalid_argument("noisy_distributions: sigma must be >= 0 (or inf)");
  }

  ClusterLabelDistributions dists;
  dists.num_clusters = assign.num_clusters;
  dists.num_classes = k;
  dists.q_hat.assign(static_cast<size_t>(assign.num_clusters) * k, 0.0);
  dists.q_tilde.assign(static_cast<size_t>(assign.num_clusters) * k, 0.0);

  for (int c = 0; c < assign.num_clusters; ++c) {
    if (assign.sizes[static_cast<size_t>(c)] == 0) {
      throw std::invalid_argument("noisy_distributions: cluster " +
                                  std::to_string(c) + " is empty");
    }
  }

  for (int i = 0; i < data.n(); ++i) {
    const int c = assign.cluster_of[static_cast<size_t>(i)];
    dists.q_hat[static_cast<size_t>(c) * k + data.label(i)] += 1.0;
  }
  for (int c = 0; c < assign.num_clusters; ++c) {
    const double inv_n = 1.0 / assign.sizes[static_cast<size_t>(c)];
    for (int y = 0; y < k; ++y) {
      dists.q_hat[static_cast<size_t>(c) * k + y] *= inv_n;
    }
  }

  const bool infinite_noise = std::isinf(sigma);
  for (int c = 0; c < assign.num_clusters; ++c) {
    double* row = dists.q_tilde.data() + static_cast<size_t>(c) * k;
    if (infinite_noise) {
      // Unbounded noise with tau = 1/K pins every entry at the threshold;
      // the renormalization fixed point is the uniform distribution.
      std::fill(row, row + k, 1.0 / k);
      continue;
    }
    RngStream cluster_rng =
        rng.derive(rng_tag::kClusterNoise, static_cast<uint64_t>(c));
    const double scale = sigma / assign.sizes[static_cast<size_t>(c)];
    std::vector<double> clipped(static_cast<size_t>(k));
    for (int y = 0; y < k; ++y) {
      double q = dists.q_hat[static_cast<size_t>(c) * k + y];
      if (sigma > 0.0) q += cluster_rng.laplace(scale);
      clipped[static_cast<size_t>(y)] = std::clamp(q, tau, 1.0);
    }
    const std::vector<double> renorm = renormalize(clipped, tau);
    std::copy(renorm.begin(), renorm.end(), row);
  }
  return dists;
}

std::vector<int> randomize_labels(const LabeledDataset& data,
                                  const ClusterAssignment& assign,
                                  const ClusterLabelDistributions& dists,
                                  double lambda, const RngStream& rng) {
  if (!(lambda >= 0.0) || lambda >= 1.0) {
    throw std::invalid_argument("randomize_labels: lambda must be in [0, 1)");
  }
  if (assign.n() != data.n()) {
    throw std::invalid_argument("randomize_labels: assignment length mismatch");
  }
  const int k = data.num_classes();
  std::vector<int> noisy(static_cast<size_t>(data.n()));
  for (int i = 0; i < data.n(); ++i) {
    RngStream ex_rng = rng.derive(rng_tag::kLabelResample, static_cast<uint64_t>(i));
    const int c = assign.cluster_of[static_cast<size_t>(i)];
    if (ex_rng.uniform() < lambda) {
      const auto row = dists.q_tilde_row(c);
      const double u = ex_rng.uniform();
      double acc = 0.0;
      int pick = k - 1;
      for (int y = 0; y < k; ++y) {
        acc += row[static_cast<size_t>(y)];
        if (u < acc) {
          pick = y;
          break;
        }
      }
      noisy[static_cast<size_t>(i)] = pick;
    } else {
      noisy[static_cast<size_t>(i)] = data.label(i);
    }
  }
  return noisy;
}

std::vector<RandomizationMatrix> build_qinv(
    const ClusterLabelDistributions& dists, double beta) {
  if (!(beta >= 0.0) || beta >= 1.0) {
    throw std::invalid_argument("build_qinv: beta must be in [0, 1)");
  }
  const int k = dists.num_classes;
  std::vector<RandomizationMatrix> out;
  out.reserve(static_cast<size_t>(dists.num_clusters));
  for (int c = 0; c < dists.num_clusters; ++c) {
    RandomizationMatrix m;
    m.beta = beta;
    m.q = SquareMatrix(k);
    const auto row = dists.q_tilde_row(c);
    for (int yp = 0; yp < k; ++yp) {
      for (int y = 0; y < k; ++y) {
        m.q.at(yp, y) = (yp == y ? 1.0 - beta : 0.0) +
                        beta * row[static_cast<size_t>(yp)];
      }
    }
    // Invertibility is guaranteed for beta < 1 (sigma_min >= (1-beta)/
    // sqrt(2K)); a singular matrix here is an internal fault, and invert()
    // throws accordingly.
    m.q_inv = invert(m.q);
    out.push_back(std::move(m));
  }
  return out;
}

PrivacyReceipt central_epsilon(const CentralParams& params) {
  validate_params(params);
  PrivacyReceipt receipt;
  receipt.mechanism = "central";
  receipt.delta = 0.0;
  receipt.params = {{"tau", params.tau},
                    {"sigma", params.sigma},
                    {"lambda", params.lambda},
                    {"beta", params.beta}};
  const double noise_term = std::isinf(params.sigma) ? 0.0
                            : params.sigma > 0.0     ? 1.0 / params.sigma
                                                     : kInfinity;
  const double rr_term =
      (params.lambda > 0.0 && params.tau > 0.0)
          ? std::log1p((1.0 - params.lambda) / (params.lambda * params.tau))
          : kInfinity;
  receipt.epsilon = noise_term + rr_term;
  return receipt;
}

CentralParams preset_uniform_rr(double epsilon_target, int num_classes) {
  if (!(epsilon_target > 0.0)) {
    throw std::invalid_argument("preset_uniform_rr: epsilon must be > 0");
  }
  if (num_classes < 2) {
    throw std::invalid_argument("preset_uniform_rr: need K >= 2");
  }
  const double k = num_classes;
  CentralParams params;
  params.tau = 1.0 / k;
  params.sigma = kInfinity;
  params.lambda = k / (k - 1.0 + std::exp(epsilon_target));
  params.beta = params.lambda;
  return params;
}

CentralParams preset_cluster_rr(double epsilon_target, double phi,
                                int num_classes) {
  if (!(epsilon_target > 0.0)) {
    throw std::invalid_argument("preset_cluster_rr: epsilon must be > 0");
  }
  if (num_classes < 2) {
    throw std::invalid_argument("preset_cluster_rr: need K >= 2");
  }
  if (!(phi > 0.0)) {
    throw std::invalid_argument(
        "preset_cluster_rr: phi must be positive; supply a measured or "
        "assumed heterogeneity, or use preset_uniform_rr");
  }
  if (phi > 1.0 / num_classes + 1e-15) {
    throw std::invalid_argument(
        "preset_cluster_rr: phi=" + std::to_string(phi) +
        " exceeds 1/K; tau = phi would violate the clip-threshold bound");
  }
  CentralParams params;
  params.tau = phi;
  params.beta = 0.0;
  params.sigma = 1.0 / epsilon_target;
  params.lambda =
      std::min(1.0 / (1.0 + (std::exp(epsilon_target) - 1.0) * phi), kLambdaCap);
  return params;
}

MechanismOutput run_central(const LabeledDataset& data,
                            const ClusterAssignment& assign,
                            const CentralParams& params, const RngStream& rng) {
  validate_params(params);
  ClusterLabelDistributions dists =
      noisy_distributions(data, assign, params.tau, params.sigma, rng);
  std::vector<int> noisy = randomize_labels(data, assign, dists, params.lambda, rng);
  MechanismOutput out{data.with_labels(std::move(noisy)),
                      build_qinv(dists, params.beta), central_epsilon(params)};
  return out;
}

}  // namespace labeldp
