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

#include <algorithm>
#include <cmath>
#include <set>

#include "labeldp/lap.hpp"

using labeldp::LapInstance;
using labeldp::RngStream;

TEST_CASE("generate_lap rejects s > K and s = K") {
  CHECK_THROWS(labeldp::generate_lap(3, 5, 4, RngStream(1)));
  CHECK_THROWS_WITH_AS(labeldp::generate_lap(3, 4, 4, RngStream(1)),
                       doctest::Contains("neighbor"), std::invalid_argument);
}

TEST_CASE("generate_lap C=1, s=1, K=2 swaps to the other label") {
  const LapInstance inst = labeldp::generate_lap(1, 1, 2, RngStream(7));
  REQUIRE(inst.truth.size() == 1);
  REQUIRE(inst.truth[0].size() == 1);
  CHECK(inst.removed_label == inst.truth[0][0]);
  CHECK(inst.added_label == 1 - inst.truth[0][0]);
}

TEST_CASE("generate_lap truth sets are distinct draws and neighbor is fresh") {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const LapInstance inst = labeldp::generate_lap(10, 10, 100, RngStream(seed));
    for (const auto& set : inst.truth) {
      CHECK(set.size() == 10);
      CHECK(std::set<int>(set.begin(), set.end()).size() == 10);
      for (int y : set) {
        CHECK(y >= 0);
        CHECK(y < 100);
      }
    }
    const auto& target = inst.truth[static_cast<size_t>(inst.neighbor_cluster)];
    CHECK(std::binary_search(target.begin(), target.end(), inst.removed_label));
    CHECK_FALSE(std::binary_search(target.begin(), target.end(), inst.added_label));
  }
}

TEST_CASE("rr mechanism at huge epsilon returns the truth exactly") {
  const LapInstance inst = labeldp::generate_lap(20, 5, 30, RngStream(3));
  const auto result = labeldp::rr_membership_mechanism(inst, 1e6, RngStream(4));
  const auto pr = labeldp::lap_precision_recall(inst.truth, result.output.pairs);
  CHECK(pr.precision == doctest::Approx(1.0));
  CHECK(pr.recall == doctest::Approx(1.0));
}

TEST_CASE("per-bit randomized response satisfies its epsilon exactly") {
  // Closed form: keep/flip ratio is e^{eps_bit} by construction.
  for (const double eps : {0.5, 1.0, 2.0, 4.0}) {
    const double eps_bit = eps / 2.0;
    const double keep = std::exp(eps_bit) / (1.0 + std::exp(eps_bit));
    CHECK(keep / (1.0 - keep) == doctest::Approx(std::exp(eps_bit)).epsilon(1e-12));
  }
}

TEST_CASE("rr mechanism keep rate matches the closed form") {
  // eps_bit = ln 3: keep prob 0.75; recall estimates the kept fraction of
  // true bits.
  const double eps_total = 2.0 * std::log(3.0);
  double recall_sum = 0.0;
  const int runs = 200;
  for (std::uint64_t seed = 0; seed < runs; ++seed) {
    const LapInstance inst = labeldp::generate_lap(50, 10, 100, RngStream(seed));
    const auto result =
        labeldp::rr_membership_mechanism(inst, eps_total, RngStream(9000 + seed));
    recall_sum +=
        labeldp::lap_precision_recall(inst.truth, result.output.pairs).recall;
  }
  // 200 runs x 500 true bits: 3 sigma ~ 0.004
  CHECK(std::fabs(recall_sum / runs - 0.75) < 0.01);
}

TEST_CASE("rr mechanism near epsilon=0 has recall 1/2 and precision s/K") {
  const double eps = 1e-9;
  double hits = 0.0;
  double output = 0.0;
  double truth_bits = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const LapInstance inst = labeldp::generate_lap(40, 10, 100, RngStream(seed));
    const auto result =
        labeldp::rr_membership_mechanism(inst, eps, RngStream(7000 + seed));
    const auto pr = labeldp::lap_precision_recall(inst.truth, result.output.pairs);
    hits += pr.recall * 400.0;
    output += static_cast<double>(result.output.pairs.size());
    truth_bits += 400.0;
  }
  CHECK(std::fabs(hits / truth_bits - 0.5) < 0.01);
  CHECK(std::fabs(hits / output - 0.1) < 0.01);  // s/K = 10/100
}

TEST_CASE("check_hardness_bound semantics") {
  CHECK_THROWS(labeldp::check_hardness_bound(1.0, 1.0, 1.0, 10, 10, 0.0));

  // phi = eta = 1 at K=100, s=10 forces epsilon >= ln 9.
  const auto below = labeldp::check_hardness_bound(1.0, 1.0, std::log(9.0), 10, 100, 0.0);
  CHECK(below.pass);
  CHECK(below.product == doctest::Approx(below.bound).epsilon(1e-12));
  const auto above = labeldp::check_hardness_bound(1.0, 1.0, 2.0, 10, 100, 0.0);
  CHECK_FALSE(above.pass);  // eps = 2 < ln 9: impossible point, bound violated
}

TEST_CASE("lap bench stays under the hardness bound at epsilon=1") {
  const auto point = labeldp::run_lap_bench(100, 10, 100, 1.0, 2000, RngStream(42));
  CHECK(point.verdict.pass);
  CHECK(point.product <= point.verdict.bound + 3.0 * point.std_error);
  // closed-form sanity: recall ~ keep prob
  const double keep = std::exp(0.5) / (1.0 + std::exp(0.5));
  CHECK(std::fabs(point.recall - keep) < 0.01);
}

TEST_CASE("doubling trials roughly halves the estimator variance") {
  // Consistency smoke: SE at 4000 trials is close to SE at 1000 over sqrt(4).
  const auto small = labeldp::run_lap_bench(50, 5, 50, 1.0, 1000, RngStream(5), 50);
  const auto big = labeldp::run_lap_bench(50, 5, 50, 1.0, 4000, RngStream(5), 50);
  CHECK(big.std_error < small.std_error);
  CHECK(big.std_error > small.std_error / 4.0);
}
