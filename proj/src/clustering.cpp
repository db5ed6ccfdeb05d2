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

#include "labeldp/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace labeldp {

ClusterAssignment attach_clusters(const LabeledDataset& data,
                                  std::vector<int> cluster_ids) {
  if (static_cast<int>(cluster_ids.size()) != data.n()) {
    throw std::invalid_argument(
        "attach_clusters: assignment length " +
        std::to_string(cluster_ids.size()) + " does not match dataset size " +
        std::to_string(data.n()));
  }
  int max_id = -1;
  for (int c : cluster_ids) {
    if (c < 0) throw std::invalid_argument("attach_clusters: negative cluster id");
    max_id = std::max(max_id, c);
  }
  ClusterAssignment assign;
  assign.num_clusters = max_id + 1;
  assign.sizes.assign(static_cast<size_t>(assign.num_clusters), 0);
  for (int c : cluster_ids) ++assign.sizes[static_cast<size_t>(c)];
  assign.cluster_of = std::move(cluster_ids);
  return assign;
}

int min_cluster_size(const ClusterAssignment& assign) {
  if (assign.sizes.empty()) {
    throw std::invalid_argument("min_cluster_size: empty assignment");
  }
  return *std::min_element(assign.sizes.begin(), assign.sizes.end());
}

std::vector<std::vector<int>> cluster_members(const ClusterAssignment& assign) {
  std::vector<std::vector<int>> members(
      static_cast<size_t>(assign.num_clusters));
  for (size_t c = 0; c < members.size(); ++c) {
    members[c].reserve(static_cast<size_t>(assign.sizes[c]));
  }
  for (int i = 0; i < assign.n(); ++i) {
    members[static_cast<size_t>(assign.cluster_of[static_cast<size_t>(i)])]
        .push_back(i);
  }
  return members;
}

namespace {

double sq_dist(const double* a, const double* b, int d) {
  double s = 0.0;
  for (int j = 0; j < d; ++j) {
    const double diff = a[j] - b[j];
    s += diff * diff;
  }
  return s;
}

// k-means++ D^2 seeding. When all remaining distances are zero (fewer
// distinct points than centroids) the first not-yet-chosen point is used.
std::vector<double> seed_plusplus(const double* x, int n, int d, int k,
                                  RngStream& rng) {
  std::vector<double> centroids(static_cast<size_t>(k) * d);
  std::vector<double> dist2(static_cast<size_t>(n),
                            std::numeric_limits<double>::infinity());
  std::vector<bool> chosen(static_cast<size_t>(n), false);

  int first = static_cast<int>(rng.uniform_index(static_cast<uint64_t>(n)));
  std::copy(x + static_cast<size_t>(first) * d, x + (static_cast<size_t>(first) + 1) * d,
            centroids.begin());
  chosen[static_cast<size_t>(first)] = true;

  for (int c = 1; c < k; ++c) {
    const double* prev = centroids.data() + static_cast<size_t>(c - 1) * d;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      dist2[static_cast<size_t>(i)] = std::min(
          dist2[static_cast<size_t>(i)], sq_dist(x + static_cast<size_t>(i) * d, prev, d));
      total += dist2[static_cast<size_t>(i)];
    }
    int next = -1;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        acc += dist2[static_cast<size_t>(i)];
        if (target < acc) {
          next = i;
          break;
        }
      }
      if (next < 0) {
        for (int i = n - 1; i >= 0; --i) {
          if (dist2[static_cast<size_t>(i)] > 0.0) {
            next = i;
            break;
          }
        }
      }
    }
    if (next < 0) {
      for (int i = 0; i < n; ++i) {
        if (!chosen[static_cast<size_t>(i)]) {
          next = i;
          break;
        }
      }
    }
    if (next < 0) next = 0;
    chosen[static_cast<size_t>(next)] = true;
    std::copy(x + static_cast<size_t>(next) * d, x + (static_cast<size_t>(next) + 1) * d,
              centroids.begin() + static_cast<size_t>(c) * d);
  }
  return centroids;
}

std::vector<double> seed_uniform(const double* x, int n, int d, int k,
                                 RngStream& rng) {
  // Sample k distinct indices by partial Fisher-Yates.
  std::vector<int> idx(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i;
  std::vector<double> centroids(static_cast<size_t>(k) * d);
  for (int c = 0; c < k; ++c) {
    const int j = c + static_cast<int>(rng.uniform_index(static_cast<uint64_t>(n - c)));
    std::swap(idx[static_cast<size_t>(c)], idx[static_cast<size_t>(j)]);
    std::copy(x + static_cast<size_t>(idx[static_cast<size_t>(c)]) * d,
              x + (static_cast<size_t>(idx[static_cast<size_t>(c)]) + 1) * d,
              centroids.begin() + static_cast<size_t>(c) * d);
  }
  return centroids;
}

}  // namespace

KMeansResult kmeans(const std::vector<double>& features, int n, int d, int k,
                    RngStream rng, const KMeansOptions& opts) {
  if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  if (k > n) {
    throw std::invalid_argument("kmeans: k=" + std::to_string(k) +
                                " exceeds n=" + std::to_string(n));
  }
  if (opts.max_iters < 1) {
    throw std::invalid_argument("kmeans: max_iters must be >= 1");
  }
  if (features.size() != static_cast<size_t>(n) * d) {
    throw std::invalid_argument("kmeans: feature buffer does not factor as n*d");
  }
  const double* x = features.data();
  RngStream seed_rng = rng.derive(rng_tag::kKMeans);

  KMeansResult result;
  result.centroids = opts.plusplus_init ? seed_plusplus(x, n, d, k, seed_rng)
                                        : seed_uniform(x, n, d, k, seed_rng);
  std::vector<double>& centroids = result.centroids;
  std::vector<int> assign(static_cast<size_t>(n), 0);
  std::vector<int> counts(static_cast<size_t>(k), 0);
  std::vector<double> sums(static_cast<size_t>(k) * d, 0.0);
  std::vector<double> point_dist(static_cast<size_t>(n), 0.0);

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    // Assignment step.
    double objective = 0.0;
    for (int i = 0; i < n; ++i) {
      const double* xi = x + static_cast<size_t>(i) * d;
      double best = std::numeric_limits<double>::infinity();
      int best_c = 0;
      for (int c = 0; c < k; ++c) {
        const double dist = sq_dist(xi, centroids.data() + static_cast<size_t>(c) * d, d);
        if (dist < best) {
          best = dist;
          best_c = c;
        }
      }
      assign[static_cast<size_t>(i)] = best_c;
      point_dist[static_cast<size_t>(i)] = best;
      objective += best;
    }
    result.objective_history.push_back(objective);
    result.iterations = iter + 1;

    // Empty-cluster repair: the point farthest from its centroid becomes the
    // new centroid, keeping the cluster count fixed.
    std::fill(counts.begin(), counts.end(), 0);
    for (int i = 0; i < n; ++i) ++counts[static_cast<size_t>(assign[static_cast<size_t>(i)])];
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<size_t>(c)] > 0) continue;
      int farthest = -1;
      double far_dist = -1.0;
      for (int i = 0; i < n; ++i) {
        if (counts[static_cast<size_t>(assign[static_cast<size_t>(i)])] <= 1) continue;
        if (point_dist[static_cast<size_t>(i)] > far_dist) {
          far_dist = point_dist[static_cast<size_t>(i)];
          farthest = i;
        }
      }
      if (farthest < 0) continue;  // n < k cannot happen; all singletons
      --counts[static_cast<size_t>(assign[static_cast<size_t>(farthest)])];
      assign[static_cast<size_t>(farthest)] = c;
      counts[static_cast<size_t>(c)] = 1;
      point_dist[static_cast<size_t>(farthest)] = 0.0;
      std::copy(x + static_cast<size_t>(farthest) * d,
                x + (static_cast<size_t>(farthest) + 1) * d,
                centroids.begin() + static_cast<size_t>(c) * d);
    }

    // Update step.
    std::fill(sums.begin(), sums.end(), 0.0);
    for (int i = 0; i < n; ++i) {
      const double* xi = x + static_cast<size_t>(i) * d;
      double* s = sums.data() + static_cast<size_t>(assign[static_cast<size_t>(i)]) * d;
      for (int j = 0; j < d; ++j) s[j] += xi[j];
    }
    double shift = 0.0;
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<size_t>(c)] == 0) continue;
      double* mu = centroids.data() + static_cast<size_t>(c) * d;
      const double inv = 1.0 / counts[static_cast<size_t>(c)];
      for (int j = 0; j < d; ++j) {
        const double updated = sums[static_cast<size_t>(c) * d + j] * inv;
        const double diff = updated - mu[j];
        shift += diff * diff;
        mu[j] = updated;
      }
    }
    if (std::sqrt(shift) < opts.tol) break;
  }

  // Final assignment against the converged centroids.
  double objective = 0.0;
  for (int i = 0; i < n; ++i) {
    const double* xi = x + static_cast<size_t>(i) * d;
    double best = std::numeric_limits<double>::infinity();
    int best_c = 0;
    for (int c = 0; c < k; ++c) {
      const double dist = sq_dist(xi, centroids.data() + static_cast<size_t>(c) * d, d);
      if (dist < best) {
        best = dist;
        best_c = c;
      }
    }
    assign[static_cast<size_t>(i)] = best_c;
    objective += best;
  }
  result.objective_history.push_back(objective);

  std::fill(counts.begin(), counts.end(), 0);
  for (int i = 0; i < n; ++i) ++counts[static_cast<size_t>(assign[static_cast<size_t>(i)])];
  // The final assignment pass can empty a cluster the in-loop repair no
  // longer sees; re-seed it the same way so n_c >= 1 always holds.
  for (int c = 0; c < k; ++c) {
    if (counts[static_cast<size_t>(c)] > 0) continue;
    int farthest = -1;
    double far_dist = -1.0;
    for (int i = 0; i < n; ++i) {
      if (counts[static_cast<size_t>(assign[static_cast<size_t>(i)])] <= 1) continue;
      const double dist = sq_dist(x + static_cast<size_t>(i) * d,
                                  centroids.data() +
                                      static_cast<size_t>(assign[static_cast<size_t>(i)]) * d,
                                  d);
      if (dist > far_dist) {
        far_dist = dist;
        farthest = i;
      }
    }
    if (farthest >= 0) {
      --counts[static_cast<size_t>(assign[static_cast<size_t>(farthest)])];
      assign[static_cast<size_t>(farthest)] = c;
      counts[static_cast<size_t>(c)] = 1;
    }
  }

  result.assignment.cluster_of = std::move(assign);
  result.assignment.num_clusters = k;
  result.assignment.sizes = std::move(counts);
  return result;
}

}  // namespace labeldp
