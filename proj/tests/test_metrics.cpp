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

#include <doctest.h>

#include <cmath>
#include <vector>

#include "labeldp/metrics.hpp"
#include "support/synth.hpp"

using labeldp::ClusterAssignment;
using labeldp::ConditionalLabelModel;
using labeldp::DiscreteDistribution;
using labeldp::LabeledDataset;
using labeldp::RngStream;

namespace {

ClusterAssignment assignment_of(std::vector<int> ids) {
  int max_id = 0;
  for (int c : ids) max_id = std::max(max_id, c);
  ClusterAssignment assign;
  assign.num_clusters = max_id + 1;
  assign.sizes.assign(static_cast<size_t>(max_id + 1), 0);
  for (int c : ids) ++assign.sizes[static_cast<size_t>(c)];
  assign.cluster_of = std::move(ids);
  return assign;
}

LabeledDataset labels_only(std::vector<int> labels, int k) {
  return LabeledDataset({}, std::move(labels), k, 0);
}

}  // namespace

TEST_CASE("tv_distance basic properties") {
  DiscreteDistribution a({0.9, 0.1});
  DiscreteDistribution b({0.5, 0.5});
  CHECK(labeldp::tv_distance(a, b) == doctest::Approx(0.8));
  CHECK(labeldp::tv_distance(b, a) == doctest::Approx(0.8));
  CHECK(labeldp::tv_distance(a, a) == doctest::Approx(0.0));
  // un-halved convention: disjoint point masses are at distance 2
  DiscreteDistribution e0({1.0, 0.0});
  DiscreteDistribution e1({0.0, 1.0});
  CHECK(labeldp::tv_distance(e0, e1) == doctest::Approx(2.0));
}

TEST_CASE("heterogeneity is zero for cluster-constant conditionals") {
  const ClusterAssignment assign = assignment_of({0, 0, 1, 1});
  std::vector<DiscreteDistribution> p_x{
      DiscreteDistribution({0.8, 0.2}), DiscreteDistribution({0.8, 0.2}),
      DiscreteDistribution({0.3, 0.7}), DiscreteDistribution({0.3, 0.7})};
  const auto model = ConditionalLabelModel::from_examples(
      p_x, {0.25, 0.25, 0.25, 0.25}, assign);
  const auto report = labeldp::heterogeneity(model, assign);
  CHECK(report.phi == doctest::Approx(0.0));
  CHECK(report.per_cluster_tv[0] == doctest::Approx(0.0));
  CHECK(report.per_cluster_tv[1] == doctest::Approx(0.0));
}

TEST_CASE("heterogeneity of split cluster is 1") {
  // One cluster, half the examples deterministic label 1, half label 0:
  // p(.|c) = (0.5, 0.5) and every example's TV term is 1.
  const ClusterAssignment assign = assignment_of({0, 0, 0, 0});
  std::vector<DiscreteDistribution> p_x{
      DiscreteDistribution({0.0, 1.0}), DiscreteDistribution({0.0, 1.0}),
      DiscreteDistribution({1.0, 0.0}), DiscreteDistribution({1.0, 0.0})};
  const auto model = ConditionalLabelModel::from_examples(
      p_x, {0.25, 0.25, 0.25, 0.25}, assign);
  const auto report = labeldp::heterogeneity(model, assign);
  CHECK(report.phi == doctest::Approx(1.0));
}

TEST_CASE("heterogeneity randomized zero-phi property") {
  RngStream rng(606);
  for (int trial = 0; trial < 50; ++trial) {
    const int clusters = 1 + static_cast<int>(rng.uniform_index(4));
    const int k = 2 + static_cast<int>(rng.uniform_index(4));
    const int per = 2 + static_cast<int>(rng.uniform_index(5));
    std::vector<int> ids;
    std::vector<DiscreteDistribution> p_x;
    std::vector<double> weights;
    for (int c = 0; c < clusters; ++c) {
      // One shared conditional per cluster.
      std::vector<double> probs(static_cast<size_t>(k));
      double sum = 0.0;
      for (double& p : probs) {
        p = rng.uniform();
        sum += p;
      }
      for (double& p : probs) p /= sum;
      for (int i = 0; i < per; ++i) {
        ids.push_back(c);
        p_x.emplace_back(probs);
        weights.push_back(0.0);
      }
    }
    // random marginal
    double wsum = 0.0;
    for (double& w : weights) {
      w = rng.uniform();
      wsum += w;
    }
    for (double& w : weights) w /= wsum;
    const ClusterAssignment assign = assignment_of(ids);
    const auto model = ConditionalLabelModel::from_examples(p_x, weights, assign);
    CHECK(labeldp::heterogeneity(model, assign).phi ==
          doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("empirical proxy: pure clusters give zero") {
  const auto data = labels_only({1, 1, 1, 0, 0, 0}, 2);
  const ClusterAssignment assign = assignment_of({0, 0, 0, 1, 1, 1});
  CHECK(labeldp::empirical_heterogeneity_proxy(data, assign) ==
        doctest::Approx(0.0));

  const auto multi = labels_only({2, 2, 0, 0, 1, 1}, 3);
  const ClusterAssignment assign3 = assignment_of({0, 0, 1, 1, 2, 2});
  CHECK(labeldp::empirical_heterogeneity_proxy(multi, assign3) ==
        doctest::Approx(0.0));
}

TEST_CASE("empirical proxy: balanced binary cluster gives 1") {
  const auto data = labels_only({1, 1, 0, 0}, 2);
  const ClusterAssignment assign = assignment_of({0, 0, 0, 0});
  CHECK(labeldp::empirical_heterogeneity_proxy(data, assign) ==
        doctest::Approx(1.0));
  const auto per_cluster = labeldp::per_cluster_proxy_tv(data, assign);
  REQUIRE(per_cluster.size() == 1);
  CHECK(per_cluster[0] == doctest::Approx(1.0));
}

TEST_CASE("empirical_distortion: no noise, no clipping gives zero") {
  const auto data = labels_only({0, 0, 1, 1, 1, 2}, 3);
  const ClusterAssignment assign = assignment_of({0, 0, 0, 0, 0, 0});
  const auto est =
      labeldp::empirical_distortion(data, assign, 0.0, 0.0, 50, RngStream(5));
  CHECK(est.psi == doctest::Approx(0.0));
}

TEST_CASE("empirical_distortion: tau=1/2 forces uniform, psi exact") {
  // p_hat = (0.9, 0.1), tau = 0.5, sigma = 0: q_tilde = (0.5, 0.5) and
  // psi = |0.5-0.9| + |0.5-0.1| = 0.8 deterministically.
  std::vector<int> labels(10, 0);
  labels[3] = 1;
  const auto data = labels_only(labels, 2);
  const ClusterAssignment assign = assignment_of(std::vector<int>(10, 0));
  const auto est =
      labeldp::empirical_distortion(data, assign, 0.5, 0.0, 20, RngStream(6));
  CHECK(est.psi == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(est.std_error == doctest::Approx(0.0));
}

TEST_CASE("empirical_distortion respects the 2K*tau + 2sqrt(2)K*sigma/s bound") {
  RngStream data_rng(979);
  for (const int k : {2, 4}) {
    for (const double tau : {0.0, 0.2 / k, 1.0 / k}) {
      for (const double sigma : {0.0, 0.5, 4.0}) {
        // 3 clusters x 40 examples, random labels
        std::vector<int> labels;
        std::vector<int> ids;
        for (int c = 0; c < 3; ++c) {
          for (int i = 0; i < 40; ++i) {
            labels.push_back(static_cast<int>(data_rng.uniform_index(k)));
            ids.push_back(c);
          }
        }
        const auto data = labels_only(labels, k);
        const ClusterAssignment assign = assignment_of(ids);
        const int s = labeldp::min_cluster_size(assign);
        const auto est = labeldp::empirical_distortion(data, assign, tau, sigma,
                                                       300, RngStream(17));
        const double bound =
            2.0 * k * tau + 2.0 * std::sqrt(2.0) * k * sigma / s;
        CHECK(est.psi <= bound + 3.0 * est.std_error + 1e-12);
      }
    }
  }
}

TEST_CASE("lap_precision_recall exact cases") {
  const std::vector<std::vector<int>> truth{{0, 1}, {2, 3}};

  SUBCASE("output equals truth") {
    const auto pr = labeldp::lap_precision_recall(
        truth, {{0, 0}, {0, 1}, {1, 2}, {1, 3}});
    CHECK(pr.precision == doctest::Approx(1.0));
    CHECK(pr.recall == doctest::Approx(1.0));
  }
  SUBCASE("output = all C*K pairs has recall 1, precision s/K") {
    std::vector<std::pair<int, int>> all;
    for (int c = 0; c < 2; ++c) {
      for (int y = 0; y < 4; ++y) all.emplace_back(c, y);
    }
    const auto pr = labeldp::lap_precision_recall(truth, all);
    CHECK(pr.recall == doctest::Approx(1.0));
    CHECK(pr.precision == doctest::Approx(0.5));  // s/K = 2/4
  }
  SUBCASE("empty output: recall 0, precision flagged undefined") {
    const auto pr = labeldp::lap_precision_recall(truth, {});
    CHECK(pr.recall == doctest::Approx(0.0));
    CHECK_FALSE(pr.precision_defined);
    CHECK(std::isnan(pr.precision));
  }
}

TEST_CASE("precision and recall stay in [0,1] on random outputs") {
  RngStream rng(123);
  const std::vector<std::vector<int>> truth{{0, 2, 4}, {1, 3, 5}};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<int, int>> pairs;
    const int count = static_cast<int>(rng.uniform_index(12));
    for (int i = 0; i < count; ++i) {
      pairs.emplace_back(static_cast<int>(rng.uniform_index(2)),
                         static_cast<int>(rng.uniform_index(6)));
    }
    const auto pr = labeldp::lap_precision_recall(truth, pairs);
    CHECK(pr.recall >= 0.0);
    CHECK(pr.recall <= 1.0);
    if (pr.precision_defined) {
      CHECK(pr.precision >= 0.0);
      CHECK(pr.precision <= 1.0);
    }
  }
}
