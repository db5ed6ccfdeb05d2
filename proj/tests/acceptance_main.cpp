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

// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures. Every tolerance is pinned here, not configurable.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "labeldp/central.hpp"
#include "labeldp/clustering.hpp"
#include "labeldp/dataset.hpp"
#include "labeldp/harness.hpp"
#include "labeldp/lap.hpp"
#include "labeldp/learner.hpp"
#include "labeldp/metrics.hpp"
#include "labeldp/p2p.hpp"
#include "support/synth.hpp"

namespace {

using labeldp::ClusterAssignment;
using labeldp::kInfinity;
using labeldp::LabeledDataset;
using labeldp::RngStream;

int g_failures = 0;

struct Criterion {
  std::string name;
  std::chrono::steady_clock::time_point start;
  bool ok = true;
  std::string detail;

  explicit Criterion(std::string label)
      : name(std::move(label)), start(std::chrono::steady_clock::now()) {}

  void require(bool condition, const std::string& what) {
    if (!condition && ok) {
      ok = false;
      detail = what;
    }
  }

  ~Criterion() {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%s] %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", name.c_str(),
                secs, detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double min_singular_value(const labeldp::SquareMatrix& m) {
  Eigen::MatrixXd em(m.size, m.size);
  for (int i = 0; i < m.size; ++i) {
    for (int j = 0; j < m.size; ++j) em(i, j) = m.at(i, j);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(em);
  return svd.singularValues().minCoeff();
}

// --- criterion 1 -----------------------------------------------------------

void criterion_well_definedness() {
  Criterion c("criterion 1: renormalize well-definedness (1e4 instances)");
  RngStream rng(1001);
  for (int trial = 0; trial < 10000; ++trial) {
    const int k = 2 + static_cast<int>(rng.uniform_index(9));  // K <= 10
    const double tau = rng.uniform() / k;
    const auto q = labeldp::testing::random_clipped(k, tau, rng);
    const auto out = labeldp::renormalize(q, tau);
    double sum = 0.0;
    for (double v : out) {
      c.require(v >= tau - 1e-12 && v <= 1.0 + 1e-12,
                "entry " + fmt(v) + " outside [tau-1e-12, 1+1e-12] at tau=" + fmt(tau));
      sum += v;
    }
    c.require(std::fabs(sum - 1.0) <= 1e-9,
              "row sum " + fmt(sum) + " deviates from 1 by more than 1e-9");
  }
}

// --- criterion 2 -----------------------------------------------------------

void criterion_matrix_bounds() {
  Criterion c("criterion 2: randomization-matrix spectral bounds (1e4 instances)");
  RngStream rng(1002);
  for (int trial = 0; trial < 10000; ++trial) {
    const int k = 2 + static_cast<int>(rng.uniform_index(5));  // K <= 6
    const double tau = rng.uniform() / k;
    const double beta = rng.uniform() * 0.95;
    labeldp::ClusterLabelDistributions dists;
    dists.num_clusters = 1;
    dists.num_classes = k;
    dists.q_tilde = labeldp::testing::random_q_tilde(k, tau, rng);
    dists.q_hat = dists.q_tilde;
    const auto mats = labeldp::build_qinv(dists, beta);
    const auto& mat = mats.front();

    const double sigma_min = min_singular_value(mat.q);
    c.require(sigma_min >= (1.0 - beta) / std::sqrt(2.0 * k) - 1e-9,
              "sigma_min " + fmt(sigma_min) + " below (1-beta)/sqrt(2K) at K=" +
                  std::to_string(k) + " beta=" + fmt(beta));
    const double col_sum = labeldp::max_column_abs_sum(mat.q_inv);
    c.require(col_sum <= std::sqrt(2.0) * k / (1.0 - beta) + 1e-9,
              "column abs sum " + fmt(col_sum) + " above sqrt(2)K/(1-beta)");
    const double residual =
        labeldp::identity_residual(labeldp::multiply(mat.q, mat.q_inv));
    c.require(residual <= 1e-8, "Q*Qinv residual " + fmt(residual));
  }
}

// --- criterion 3 -----------------------------------------------------------

void criterion_unbiasedness() {
  Criterion c("criterion 3: unbiasedness oracle, beta = lambda (1e3 instances)");
  RngStream rng(1003);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 2 + static_cast<int>(rng.uniform_index(7));  // K <= 8
    const double tau = 0.01 + rng.uniform() * (1.0 / k - 0.01);
    const double lambda = rng.uniform() * 0.95;  // beta = lambda
    labeldp::ClusterLabelDistributions dists;
    dists.num_clusters = 1;
    dists.num_classes = k;
    dists.q_tilde = labeldp::testing::random_q_tilde(k, tau, rng);
    dists.q_hat = dists.q_tilde;
    const auto mats = labeldp::build_qinv(dists, lambda);
    const auto& q_inv = mats.front().q_inv;

    std::vector<double> loss(static_cast<size_t>(k));
    for (double& v : loss) v = rng.uniform();  // any bounded loss in [0,1]^K
    const int y_true = static_cast<int>(rng.uniform_index(static_cast<uint64_t>(k)));

    // l~(y) = sum_{y'} Qinv[y', y] l(y'); exact enumeration over noisy labels.
    double expectation = 0.0;
    for (int y = 0; y < k; ++y) {
      double modified = 0.0;
      for (int yp = 0; yp < k; ++yp) {
        modified += q_inv.at(yp, y) * loss[static_cast<size_t>(yp)];
      }
      const double prob = (y == y_true ? 1.0 - lambda : 0.0) +
                          lambda * dists.q_tilde[static_cast<size_t>(y)];
      expectation += prob * modified;
    }
    c.require(std::fabs(expectation - loss[static_cast<size_t>(y_true)]) <= 1e-9,
              "E[l~] = " + fmt(expectation) + " vs l = " +
                  fmt(loss[static_cast<size_t>(y_true)]) + " at K=" +
                  std::to_string(k) + " lambda=" + fmt(lambda));
  }
}

// --- criterion 4 -----------------------------------------------------------

void criterion_accountant_roundtrip() {
  Criterion c("criterion 4: central accountant round-trips and RR ratio bound");
  for (const int k : {2, 10, 100}) {
    for (int i = 0; i < 80; ++i) {
      const double eps = 0.1 + i * (8.0 - 0.1) / 79.0;
      const auto params = labeldp::preset_uniform_rr(eps, k);
      const double back = labeldp::central_epsilon(params).epsilon;
      c.require(std::fabs(back - eps) <= 1e-9,
                "round-trip " + fmt(back) + " != " + fmt(eps) + " at K=" +
                    std::to_string(k));
    }
  }
  RngStream rng(1004);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 2 + static_cast<int>(rng.uniform_index(9));
    const double tau = 1e-3 + rng.uniform() * (1.0 / k - 1e-3);
    const double lambda = 0.05 + rng.uniform() * 0.9;
    const auto q = labeldp::testing::random_q_tilde(k, tau, rng);
    const double bound = 1.0 + (1.0 - lambda) / (lambda * tau);
    for (double prob : q) {
      const double ratio = ((1.0 - lambda) + lambda * prob) / (lambda * prob);
      c.require(ratio <= bound + 1e-9,
                "RR ratio " + fmt(ratio) + " exceeds 1+(1-lambda)/(lambda tau) = " +
                    fmt(bound));
    }
  }
}

// --- criterion 5 -----------------------------------------------------------

void criterion_p2p_audit() {
  Criterion c("criterion 5: exact binomial audit grid + exp approximation bound");
  for (const int s : {64, 256, 1024}) {
    for (const double theta : {0.1, 0.5, 1.0}) {
      for (const double alpha : {0.05, 0.25, 0.5}) {
        if (static_cast<double>(s) * alpha < 2.0) continue;
        const double xi_max = 3.0 * alpha * std::sqrt(theta * s * (1.0 - alpha));
        const double xi = std::min(labeldp::default_xi(s), xi_max);
        const auto receipt = labeldp::p2p_privacy(s, theta, alpha, xi);
        for (const int n : {s, 2 * s}) {
          for (double p : {alpha, 0.25, 0.5, 0.75, 1.0 - alpha}) {
            p = std::clamp(p, alpha, 1.0 - alpha);
            const auto report = labeldp::binomial_audit(
                n, p, theta, receipt.epsilon, receipt.delta, xi);
            c.require(report.pass,
                      "audit failed at s=" + std::to_string(s) + " theta=" +
                          fmt(theta) + " alpha=" + fmt(alpha) + " n=" +
                          std::to_string(n) + " p=" + fmt(p) + " (ratio- " +
                          fmt(report.max_ratio_minus) + ", ratio+ " +
                          fmt(report.max_ratio_plus) + ", e^eps " +
                          fmt(std::exp(receipt.epsilon)) + ", tails " +
                          fmt(report.tail_minus) + "/" + fmt(report.tail_plus) +
                          " vs delta " + fmt(receipt.delta) + ")");
          }
        }
      }
    }
  }
  // log-spaced x in [2, 1e8], all four (sgn, a) combinations
  for (int i = 0; i < 100; ++i) {
    const double x = 2.0 * std::pow(1e8 / 2.0, i / 99.0);
    for (const int sgn : {+1, -1}) {
      for (const double a : {0.5, 1.0}) {
        const auto check = labeldp::check_exp_approx(x, sgn, a);
        c.require(check.holds, "exp approximation fails at x=" + fmt(x) + " sgn=" +
                                   std::to_string(sgn) + " a=" + fmt(a) +
                                   " (lhs " + fmt(check.lhs) + " rhs " +
                                   fmt(check.rhs) + ")");
      }
    }
  }
}

// --- criterion 6 -----------------------------------------------------------

void criterion_schedule_delta() {
  Criterion c("criterion 6: schedule delta <= 1/s^2 at the default constants");
  for (const double s : {1e5, 1e6, 1e7}) {
    for (const double theta : {0.25, 1.0}) {
      const int si = static_cast<int>(s);
      const double alpha = labeldp::schedule_alpha(si, theta);
      const double xi = labeldp::default_xi(si);
      const auto receipt = labeldp::p2p_privacy(si, theta, alpha, xi);
      c.require(receipt.delta <= 1.0 / (s * s) * (1.0 + 1e-9),
                "delta " + fmt(receipt.delta) + " above 1/s^2 = " +
                    fmt(1.0 / (s * s)) + " at s=" + fmt(s) + " theta=" +
                    fmt(theta));
    }
  }
}

// --- criterion 7 -----------------------------------------------------------

void criterion_distortion_bound() {
  Criterion c("criterion 7: cluster-distortion bound on a 27-point grid");
  RngStream data_rng(1007);
  const int s = 50;
  for (const int k : {2, 4, 8}) {
    // 3 clusters of size s with random labels
    std::vector<int> labels;
    std::vector<int> ids;
    for (int cluster = 0; cluster < 3; ++cluster) {
      for (int i = 0; i < s; ++i) {
        labels.push_back(static_cast<int>(data_rng.uniform_index(static_cast<uint64_t>(k))));
        ids.push_back(cluster);
      }
    }
    const LabeledDataset data({}, labels, k, 0);
    const ClusterAssignment assign = labeldp::attach_clusters(data, ids);
    for (const double tau : {0.0, 0.5 / k, 1.0 / k}) {
      for (const double sigma : {0.0, 0.5, 5.0}) {
        const auto est = labeldp::empirical_distortion(data, assign, tau, sigma,
                                                       1000, RngStream(1700 + k));
        const double bound = 2.0 * k * tau + 2.0 * std::sqrt(2.0) * k * sigma / s;
        c.require(est.psi <= bound + 3.0 * est.std_error + 1e-12,
                  "psi " + fmt(est.psi) + " above bound " + fmt(bound) +
                      " + 3SE (" + fmt(est.std_error) + ") at K=" +
                      std::to_string(k) + " tau=" + fmt(tau) + " sigma=" +
                      fmt(sigma));
      }
    }
  }
}

// --- criterion 8 -----------------------------------------------------------

void criterion_gradient_check() {
  Criterion c("criterion 8: analytic vs finite-difference gradients (100 instances)");
  RngStream rng(1008);
  labeldp::LossSpec spec{labeldp::LossKind::kCrossEntropy, 1.0, nullptr, nullptr};
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 2 + static_cast<int>(rng.uniform_index(3));
    const int d = 1 + static_cast<int>(rng.uniform_index(5));
    const int n = 3 + static_cast<int>(rng.uniform_index(6));
    std::vector<double> features(static_cast<size_t>(n) * d);
    std::vector<int> labels(static_cast<size_t>(n));
    for (double& v : features) v = rng.uniform() * 2.0 - 1.0;
    for (int& y : labels) y = static_cast<int>(rng.uniform_index(static_cast<uint64_t>(k)));
    const LabeledDataset data(features, labels, k, d);
    labeldp::LinearHypothesis h = labeldp::LinearHypothesis::zeros(k, d);
    for (double& w : h.weights) w = rng.uniform() - 0.5;
    for (double& b : h.bias) b = rng.uniform() - 0.5;

    const auto analytic = labeldp::loss_and_gradient(h, data, spec);
    const double step = 1e-6;
    double err_sq = 0.0;
    double norm_sq = 0.0;
    for (int p = 0; p < k * d + k; ++p) {
      labeldp::LinearHypothesis plus = h;
      labeldp::LinearHypothesis minus = h;
      (p < k * d ? plus.weights[static_cast<size_t>(p)]
                 : plus.bias[static_cast<size_t>(p - k * d)]) += step;
      (p < k * d ? minus.weights[static_cast<size_t>(p)]
                 : minus.bias[static_cast<size_t>(p - k * d)]) -= step;
      const double fd = (labeldp::loss_and_gradient(plus, data, spec).loss -
                         labeldp::loss_and_gradient(minus, data, spec).loss) /
                        (2.0 * step);
      const double diff = fd - analytic.grad[static_cast<size_t>(p)];
      err_sq += diff * diff;
      norm_sq += analytic.grad[static_cast<size_t>(p)] *
                 analytic.grad[static_cast<size_t>(p)];
    }
    const double rel = std::sqrt(err_sq) / std::max(1.0, std::sqrt(norm_sq));
    c.require(rel < 1e-5, "relative gradient error " + fmt(rel));
  }
}

// --- criterion 9 -----------------------------------------------------------

struct MeanStd {
  double mean = 0.0;
  double std_dev = 0.0;
};

MeanStd aggregate(const labeldp::SweepResult& result, const std::string& mech,
                  double eps, int count, bool normalized) {
  double sum = 0.0, sum_sq = 0.0;
  int n = 0;
  for (const auto& row : result.rows) {
    if (row.mechanism != mech || row.clusters != count ||
        row.epsilon_target != eps) {
      continue;
    }
    const double v = normalized ? row.normalized_accuracy : row.accuracy;
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  MeanStd out;
  if (n > 0) {
    out.mean = sum / n;
    if (n > 1) {
      out.std_dev = std::sqrt(std::max(0.0, (sum_sq - n * out.mean * out.mean) / (n - 1)));
    }
  }
  return out;
}

void criterion_trend_reproduction() {
  Criterion c("criterion 9: privacy/utility trend reproduction (synthetic, 5 trials)");
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "labeldp_acceptance_sweep";
  fs::create_directories(dir);

  labeldp::testing::BlobSpec spec;
  spec.blobs = 10;
  spec.per_blob = 500;  // n = 5000
  spec.dim = 20;
  spec.separation = 8.0;
  spec.label_noise = 0.05;
  const auto split = labeldp::testing::make_blob_split(spec, 200, RngStream(91));
  const std::string train_path = (dir / "train.csv").string();
  const std::string test_path = (dir / "test.csv").string();
  labeldp::write_csv(train_path, split.train);
  labeldp::write_csv(test_path, split.test);

  // The paper's experiment shape: 100 learned clusters on 10-class data.
  // Hyperparameters push SGD to the population optimum so heavily-noised
  // arms settle at their asymptotes instead of wandering.
  labeldp::SweepConfig config;
  config.train_path = train_path;
  config.test_path = test_path;
  config.cluster_counts = {100};
  config.epsilons = {0.25, 0.5, 1.0, 2.0};
  config.mechanisms = {labeldp::SweepMechanism::kUniformRR,
                       labeldp::SweepMechanism::kClusterRR};
  config.trials = 5;
  config.seed = 9;
  config.phi = 0.001;
  config.hyperparams.lr = 0.02;
  config.hyperparams.epochs = 60;
  config.hyperparams.batch = 256;
  config.hyperparams.l2 = 0.01;
  const auto result = labeldp::run_sweep(config);

  // (a) ClusterRR beats UniformRR by >= 0.05 normalized at every eps <= 1.
  for (const double eps : {0.25, 0.5, 1.0}) {
    const auto cluster = aggregate(result, "cluster_rr", eps, 100, true);
    const auto uniform = aggregate(result, "uniform_rr", eps, 100, true);
    c.require(cluster.mean >= uniform.mean + 0.05,
              "gap at eps=" + fmt(eps) + ": cluster " + fmt(cluster.mean) +
                  " vs uniform " + fmt(uniform.mean));
  }
  // (b) both curves non-decreasing within one pooled std.
  for (const std::string mech : {"uniform_rr", "cluster_rr"}) {
    for (size_t i = 1; i < config.epsilons.size(); ++i) {
      const auto lo = aggregate(result, mech, config.epsilons[i - 1], 100, true);
      const auto hi = aggregate(result, mech, config.epsilons[i], 100, true);
      const double pooled = std::sqrt(
          (lo.std_dev * lo.std_dev + hi.std_dev * hi.std_dev) / 2.0);
      c.require(hi.mean >= lo.mean - pooled,
                mech + " decreases from eps=" + fmt(config.epsilons[i - 1]) +
                    " (" + fmt(lo.mean) + ") to eps=" +
                    fmt(config.epsilons[i]) + " (" + fmt(hi.mean) +
                    ") beyond pooled std " + fmt(pooled));
    }
  }
  // (c) cluster-count sweep at eps = 0.5: minimum at count 1.
  labeldp::SweepConfig counts_config = config;
  counts_config.cluster_counts = {1, 2, 10, 100};
  counts_config.epsilons = {0.5};
  counts_config.mechanisms = {labeldp::SweepMechanism::kClusterRR};
  const auto counts_result = labeldp::run_sweep(counts_config);
  double acc_at_one = 0.0;
  double min_other = kInfinity;
  std::string detail;
  for (const int count : counts_config.cluster_counts) {
    const auto agg = aggregate(counts_result, "cluster_rr", 0.5, count, false);
    detail += " count " + std::to_string(count) + ": " + fmt(agg.mean) + ";";
    if (count == 1) {
      acc_at_one = agg.mean;
    } else {
      min_other = std::min(min_other, agg.mean);
    }
  }
  c.require(acc_at_one < min_other,
            "accuracy minimum not at count=1 --" + detail);
}

// --- criterion 10 ----------------------------------------------------------

void criterion_lap_hardness() {
  Criterion c("criterion 10: LAP hardness bound, RR membership mechanism");
  const std::vector<std::pair<int, int>> shapes{{100, 10}, {50, 5}};
  for (const auto& [K, s] : shapes) {
    const int C = K;  // C clusters of s labels each
    for (const double eps : {0.5, 1.0, 2.0, 4.0}) {
      const auto point = labeldp::run_lap_bench(
          C, s, K, eps, 10000,
          RngStream(1010).derive(labeldp::rng_tag::kTrial,
                                 static_cast<uint64_t>(K * 1000 + eps * 8)));
      c.require(point.verdict.pass,
                "product " + fmt(point.product) + " above bound " +
                    fmt(point.verdict.bound) + " + 3SE (" +
                    fmt(point.std_error) + ") at K=" + std::to_string(K) +
                    " s=" + std::to_string(s) + " eps=" + fmt(eps));
    }
  }
}

}  // namespace

int main() {
  std::printf("labeldp acceptance suite\n");
  criterion_well_definedness();
  criterion_matrix_bounds();
  criterion_unbiasedness();
  criterion_accountant_roundtrip();
  criterion_p2p_audit();
  criterion_schedule_delta();
  criterion_distortion_bound();
  criterion_gradient_check();
  criterion_trend_reproduction();
  criterion_lap_hardness();
  std::printf("criterion 11 (CLI determinism) runs in the labeldp_cli_determinism binary\n");
  if (g_failures > 0) {
    std::printf("FAILED: %d criteria\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
