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

// Test-only synthetic data and fixtures shared by the unit and acceptance
// suites.

#ifndef LABELDP_TESTS_SUPPORT_SYNTH_HPP
#define LABELDP_TESTS_SUPPORT_SYNTH_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "labeldp/central.hpp"
#include "labeldp/clustering.hpp"
#include "labeldp/dataset.hpp"
#include "labeldp/rng.hpp"

namespace labeldp::testing {

struct BlobSpec {
  int blobs = 10;
  int per_blob = 500;
  int dim = 20;
  double separation = 6.0;   // distance of each center from the origin
  double label_noise = 0.0;  // probability of replacing the label uniformly
  int num_classes = 0;       // 0 = one class per blob
};

struct BlobData {
  LabeledDataset data;
  std::vector<int> blob_of;  // ground-truth component per example
};

struct BlobSplit {
  LabeledDataset train;
  LabeledDataset test;
  std::vector<int> train_blob_of;
};

// Isotropic unit-variance Gaussian blobs at `separation`-scaled random unit
// directions; label = blob id, optionally hit with uniform label noise.
inline BlobData make_blobs(const BlobSpec& spec, RngStream rng) {
  const int k = spec.num_classes > 0 ? spec.num_classes : spec.blobs;
  const int n = spec.blobs * spec.per_blob;
  std::vector<double> centers(static_cast<size_t>(spec.blobs) * spec.dim);
  RngStream center_rng = rng.derive(rng_tag::kSynthetic, 1);
  const double min_gap = 0.9 * spec.separation;
  for (int b = 0; b < spec.blobs; ++b) {
    double* c = centers.data() + static_cast<size_t>(b) * spec.dim;
    for (int attempt = 0; attempt < 500; ++attempt) {
      double norm = 0.0;
      for (int j = 0; j < spec.dim; ++j) {
        c[j] = center_rng.gaussian();
        norm += c[j] * c[j];
      }
      norm = std::sqrt(norm);
      for (int j = 0; j < spec.dim; ++j) c[j] = c[j] / norm * spec.separation;
      bool clear = true;
      for (int prev = 0; prev < b && clear; ++prev) {
        const double* p = centers.data() + static_cast<size_t>(prev) * spec.dim;
        double dist2 = 0.0;
        for (int j = 0; j < spec.dim; ++j) dist2 += (c[j] - p[j]) * (c[j] - p[j]);
        clear = dist2 >= min_gap * min_gap;
      }
      if (clear) break;
    }
  }
  std::vector<double> features(static_cast<size_t>(n) * spec.dim);
  std::vector<int> labels(static_cast<size_t>(n));
  std::vector<int> blob_of(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int b = i / spec.per_blob;
    RngStream point_rng = rng.derive(rng_tag::kSynthetic, 100 + static_cast<uint64_t>(i));
    double* x = features.data() + static_cast<size_t>(i) * spec.dim;
    const double* c = centers.data() + static_cast<size_t>(b) * spec.dim;
    for (int j = 0; j < spec.dim; ++j) x[j] = c[j] + point_rng.gaussian();
    int label = b % k;
    if (spec.label_noise > 0.0 && point_rng.uniform() < spec.label_noise) {
      label = static_cast<int>(point_rng.uniform_index(static_cast<uint64_t>(k)));
    }
    labels[static_cast<size_t>(i)] = label;
    blob_of[static_cast<size_t>(i)] = b;
  }
  return BlobData{LabeledDataset(std::move(features), std::move(labels), k, spec.dim),
                  std::move(blob_of)};
}

// Best label accuracy of an assignment against reference ids under the
// optimal greedy relabeling (exact for well-separated fixtures).
inline double partition_agreement(const std::vector<int>& a,
                                  const std::vector<int>& b) {
  std::map<std::pair<int, int>, int> joint;
  for (size_t i = 0; i < a.size(); ++i) ++joint[{a[i], b[i]}];
  std::vector<std::tuple<int, int, int>> cells;
  for (const auto& [key, count] : joint) {
    cells.emplace_back(count, key.first, key.second);
  }
  std::sort(cells.rbegin(), cells.rend());
  std::map<int, int> used_a;
  std::map<int, bool> used_b;
  int matched = 0;
  for (const auto& [count, ca, cb] : cells) {
    if (used_a.count(ca) || used_b.count(cb)) continue;
    used_a[ca] = cb;
    used_b[cb] = true;
    matched += count;
  }
  return static_cast<double>(matched) / static_cast<double>(a.size());
}

// Two partitions are equal (up to relabeling) iff co-membership matches.
inline bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  std::map<int, int> map_ab;
  std::map<int, int> map_ba;
  for (size_t i = 0; i < a.size(); ++i) {
    auto [it_ab, fresh_ab] = map_ab.emplace(a[i], b[i]);
    if (!fresh_ab && it_ab->second != b[i]) return false;
    auto [it_ba, fresh_ba] = map_ba.emplace(b[i], a[i]);
    if (!fresh_ba && it_ba->second != a[i]) return false;
  }
  return true;
}

// Train/test split drawn from the same blob centers: per_blob points per
// blob go to train, test_per_blob to test.
inline BlobSplit make_blob_split(BlobSpec spec, int test_per_blob, RngStream rng) {
  const int train_per_blob = spec.per_blob;
  spec.per_blob = train_per_blob + test_per_blob;
  BlobData all = make_blobs(spec, rng);
  std::vector<int> train_rows;
  std::vector<int> test_rows;
  std::vector<int> train_blob_of;
  for (int i = 0; i < all.data.n(); ++i) {
    if (i % spec.per_blob < train_per_blob) {
      train_rows.push_back(i);
      train_blob_of.push_back(all.blob_of[static_cast<size_t>(i)]);
    } else {
      test_rows.push_back(i);
    }
  }
  return BlobSplit{all.data.subset(train_rows), all.data.subset(test_rows),
                   std::move(train_blob_of)};
}

// Random valid post-clip vector for renormalize(): entries in [tau, 1].
inline std::vector<double> random_clipped(int k, double tau, RngStream& rng) {
  std::vector<double> q(static_cast<size_t>(k));
  for (int y = 0; y < k; ++y) {
    q[static_cast<size_t>(y)] = tau + rng.uniform() * (1.0 - tau);
  }
  return q;
}

// Random renormalized cluster label distribution at threshold tau.
inline std::vector<double> random_q_tilde(int k, double tau, RngStream& rng) {
  return renormalize(random_clipped(k, tau, rng), tau);
}

}  // namespace labeldp::testing

#endif  // LABELDP_TESTS_SUPPORT_SYNTH_HPP
