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

#ifndef LABELDP_CLUSTERING_HPP
#define LABELDP_CLUSTERING_HPP

#include <vector>

#include "labeldp/dataset.hpp"
#include "labeldp/rng.hpp"

namespace labeldp {

// Partition of the n examples into C clusters.
struct ClusterAssignment {
  std::vector<int> cluster_of;  // length n, values in [0, C)
  int num_clusters = 0;
  std::vector<int> sizes;  // length C, sizes[c] = |{i : cluster_of[i] = c}|

  int n() const { return static_cast<int>(cluster_of.size()); }
};

// Builds the assignment from raw per-example cluster ids (computed or read
// from a `cluster` CSV column) and validates it against the dataset length.
ClusterAssignment attach_clusters(const LabeledDataset& data,
                                  std::vector<int> cluster_ids);

// Smallest cluster size `s`; privacy accountants below require it.
int min_cluster_size(const ClusterAssignment& assign);

// Per-cluster example index lists (members[c] sorted ascending).
std::vector<std::vector<int>> cluster_members(const ClusterAssignment& assign);

struct KMeansOptions {
  int max_iters = 100;
  double tol = 1e-6;
  // D^2 (k-means++) seeding by default; plain uniform seeding behind a flag.
  bool plusplus_init = true;
};

struct KMeansResult {
  ClusterAssignment assignment;
  std::vector<double> centroids;  // row-major k*d
  // Objective (sum of squared distances to assigned centroid) after each
  // assignment step; non-increasing across Lloyd iterations.
  std::vector<double> objective_history;
  int iterations = 0;
};

// Lloyd's algorithm on raw Euclidean features (callers pre-normalize).
// Empty clusters are repaired by re-seeding from the point farthest from its
// centroid, so every cluster ends non-empty.
KMeansResult kmeans(const std::vector<double>& features, int n, int d, int k,
                    RngStream rng, const KMeansOptions& opts = {});

inline KMeansResult kmeans(const LabeledDataset& data, int k, RngStream rng,
                           const KMeansOptions& opts = {}) {
  return kmeans(data.features(), data.n(), data.dim(), k, rng, opts);
}

}  // namespace labeldp

#endif  // LABELDP_CLUSTERING_HPP
