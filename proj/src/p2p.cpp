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

#include "labeldp/p2p.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace labeldp {

double schedule_alpha(int s, double theta) {
  if (s < 2) throw std::invalid_argument("schedule_alpha: need s >= 2");
  if (!(theta > 0.0) || theta > 1.0) {
    throw std::invalid_argument("schedule_alpha: theta must be in (0, 1]");
  }
  const double alpha =
      4.0 * std::sqrt(2.0) * std::log(static_cast<double>(s)) /
      std::sqrt(theta * static_cast<double>(s));
  if (alpha > 0.5) {
    // Solve 4*sqrt(2)*ln(s)/sqrt(theta*s) <= 1/2 for the smallest workable s.
    int lo = s;
    long long hi = 1;
    while (true) {
      hi *= 2;
      if (hi > (1LL << 62)) break;
      const double a = 4.0 * std::sqrt(2.0) * std::log(static_cast<double>(hi)) /
                       std::sqrt(theta * static_cast<double>(hi));
      if (hi > lo && a <= 0.5) break;
    }
    throw std::invalid_argument(
        "schedule_alpha: formula gives alpha=" + std::to_string(alpha) +
        " > 1/2 for s=" + std::to_string(s) + ", theta=" +
        std::to_string(theta) + "; need min cluster size of roughly " +
        std::to_string(hi) + " or larger for this theta");
  }
  return alpha;
}

double default_xi(int s) {
  if (s < 2) throw std::invalid_argument("default_xi: need s >= 2");
  return 4.0 * std::sqrt(std::log(static_cast<double>(s)));
}

namespace {

bool accountant_preconditions_hold(int s, double theta, double alpha, double xi) {
  if (s < 1 || !(alpha > 0.0) || alpha >= 1.0) return false;
  if (!(theta >= 0.0) || theta > 1.0) return false;
  if (static_cast<double>(s) * alpha < 2.0) return false;
  const double xi_max =
      3.0 * alpha * std::sqrt(theta * static_cast<double>(s) * (1.0 - alpha));
  return xi >= 0.0 && xi <= xi_max + 1e-12;
}

}  // namespace

PrivacyReceipt p2p_privacy(int s, double theta, double alpha, double xi) {
  if (s < 1) throw std::invalid_argument("p2p_privacy: need s >= 1");
  if (!(theta >= 0.0) || theta > 1.0) {
    throw std::invalid_argument("p2p_privacy: theta must be in [0, 1]");
  }
  if (!(alpha > 0.0) || alpha >= 1.0) {
    throw std::invalid_argument("p2p_privacy: alpha must be in (0, 1)");
  }
  const double s_alpha = static_cast<double>(s) * alpha;
  if (s_alpha < 2.0) {
    throw std::invalid_argument(
        "p2p_privacy: clusters must have size at least 2/alpha (s*alpha=" +
        std::to_string(s_alpha) + " < 2)");
  }
  const double xi_max =
      3.0 * alpha * std::sqrt(theta * static_cast<double>(s) * (1.0 - alpha));
  if (!(xi >= 0.0) || xi > xi_max + 1e-12) {
    throw std::invalid_argument(
        "p2p_privacy: xi=" + std::to_string(xi) + " outside [0, " +
        std::to_string(xi_max) + "] = [0, 3*alpha*sqrt(theta*s*(1-alpha))]");
  }

  PrivacyReceipt receipt;
  receipt.mechanism = "p2p";
  receipt.epsilon = theta * std::log(std::exp(1.0) + 3.0 / s_alpha) +
                    std::sqrt(theta) * xi * std::log1p(3.0 / std::sqrt(s_alpha));
  receipt.delta = std::exp(-alpha * xi * xi /
                           (4.0 * (alpha + 1.0 / static_cast<double>(s)) *
                            (1.0 - alpha)));
  receipt.params = {{"alpha", alpha},
                    {"theta", theta},
                    {"xi", xi},
                    {"s", static_cast<double>(s)}};
  if (alpha <= 0.5) {
    receipt.params["peer_view_epsilon"] = per_peer_view_epsilon(alpha);
  }
  // Documented per-peer (0, 1/s) remark; not audited.
  receipt.params["peer_view_delta"] = 1.0 / static_cast<double>(s);
  return receipt;
}

double per_peer_view_epsilon(double alpha) {
  if (!(alpha > 0.0) || alpha > 0.5) {
    throw std::invalid_argument("per_peer_view_epsilon: alpha must be in (0, 1/2]");
  }
  return std::log((1.0 - alpha) / alpha);
}

P2PResult run_p2p(const LabeledDataset& data, const ClusterAssignment& assign,
                  const P2PParams& params, const RngStream& rng) {
  if (data.num_classes() != 2) {
    throw std::invalid_argument("run_p2p: binary labels required (K=2), got K=" +
                                std::to_string(data.num_classes()));
  }
  if (assign.n() != data.n()) {
    throw std::invalid_argument("run_p2p: assignment length mismatch");
  }
  if (!(params.alpha >= 0.0) || params.alpha > 1.0) {
    throw std::invalid_argument("run_p2p: alpha must be in [0, 1]");
  }
  if (!(params.theta >= 0.0) || params.theta > 1.0) {
    throw std::invalid_argument("run_p2p: theta must be in [0, 1]");
  }
  for (int c = 0; c < assign.num_clusters; ++c) {
    if (assign.sizes[static_cast<size_t>(c)] == 0) {
      throw std::invalid_argument("run_p2p: cluster " + std::to_string(c) +
                                  " is empty");
    }
  }

  const auto members = cluster_members(assign);
  const int n = data.n();
  P2PResult result{LabeledDataset({}, {}, 2, data.dim()), {}, {}, {}};
  result.trace.resize(static_cast<size_t>(n));

  std::vector<RngStream> users;
  users.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    users.push_back(rng.derive(rng_tag::kP2PUser, static_cast<uint64_t>(i)));
  }

  // Pass 1: every user flips her own label.
  for (int i = 0; i < n; ++i) {
    auto& rec = result.trace[static_cast<size_t>(i)];
    rec.own_label = data.label(i);
    rec.flipped_label = users[static_cast<size_t>(i)].uniform() < params.alpha
                            ? 1 - rec.own_label
                            : rec.own_label;
  }
  // Pass 2: peer selection (with replacement, self allowed), report,
  // subsample. Draws continue on each user's own stream.
  for (int i = 0; i < n; ++i) {
    RngStream& user = users[static_cast<size_t>(i)];
    auto& rec = result.trace[static_cast<size_t>(i)];
    const auto& pool =
        members[static_cast<size_t>(assign.cluster_of[static_cast<size_t>(i)])];
    rec.peer = pool[user.uniform_index(pool.size())];
    rec.reported_label =
        result.trace[static_cast<size_t>(rec.peer)].flipped_label;
    rec.included = user.uniform() < params.theta;
    if (rec.included) result.included_rows.push_back(i);
  }

  std::vector<int> noisy_labels;
  noisy_labels.reserve(result.included_rows.size());
  for (int i : result.included_rows) {
    noisy_labels.push_back(result.trace[static_cast<size_t>(i)].reported_label);
  }
  LabeledDataset rows = data.subset(result.included_rows);
  result.noisy_data = rows.with_labels(std::move(noisy_labels));

  const int s = min_cluster_size(assign);
  if (accountant_preconditions_hold(s, params.theta, params.alpha, params.xi)) {
    result.receipt = p2p_privacy(s, params.theta, params.alpha, params.xi);
  } else {
    result.receipt.mechanism = "p2p";
    result.receipt.epsilon = kInfinity;
    result.receipt.delta = 1.0;
    result.receipt.params = {{"alpha", params.alpha},
                             {"theta", params.theta},
                             {"xi", params.xi},
                             {"s", static_cast<double>(s)},
                             {"no_guarantee", 1.0}};
  }
  return result;
}

ApproxCheck check_exp_approx(double x, int sgn, double a) {
  if (!(x >= 2.0)) {
    throw std::invalid_argument("check_exp_approx: need x >= 2");
  }
  if (sgn != 1 && sgn != -1) {
    throw std::invalid_argument("check_exp_approx: sgn must be +1 or -1");
  }
  if (a != 0.5 && a != 1.0) {
    throw std::invalid_argument("check_exp_approx: a must be 1/2 or 1");
  }
  ApproxCheck check;
  const double xa = std::pow(x, a);
  check.lhs = std::exp(static_cast<double>(sgn) * xa *
                       std::log1p(static_cast<double>(sgn) / x));
  check.rhs = std::exp(2.0 * a - 1.0) + 3.0 / xa;
  check.holds = check.lhs <= check.rhs + 1e-12;
  return check;
}

namespace {

double log_binom_pmf(int k, int t, double p) {
  if (p <= 0.0) return k == 0 ? 0.0 : -kInfinity;
  if (p >= 1.0) return k == t ? 0.0 : -kInfinity;
  return std::lgamma(static_cast<double>(t) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(t - k) + 1.0) +
         static_cast<double>(k) * std::log(p) +
         static_cast<double>(t - k) * std::log1p(-p);
}

}  // namespace

BinomialAuditReport audit_binomial_pair(int trials, double p, double p_prime,
                                        double xi, double epsilon,
                                        double delta) {
  if (trials < 1) {
    throw std::invalid_argument("binomial audit: need at least one trial (t >= 1)");
  }
  if (!(p > 0.0) || !(p < 1.0) || !(p_prime > 0.0) || !(p_prime < 1.0)) {
    throw std::invalid_argument("binomial audit: probabilities must be in (0, 1)");
  }
  BinomialAuditReport report;
  report.trials = trials;
  report.p = p;
  report.p_prime = p_prime;
  report.epsilon_bound = epsilon;
  report.delta_bound = delta;

  const double t = static_cast<double>(trials);
  const double q = 1.0 - p;
  const double lower = t * p - xi * std::sqrt(t * q);  // S- cutoff
  const double upper = t * p + xi * std::sqrt(t * p);  // S+ cutoff

  double tail_minus = 0.0;
  double tail_plus = 0.0;
  for (int k = 0; k <= trials; ++k) {
    const double log_f = log_binom_pmf(k, trials, p);
    const double log_f_prime = log_binom_pmf(k, trials, p_prime);
    const bool in_minus = static_cast<double>(k) >= lower;
    const bool in_plus = static_cast<double>(k) <= upper;
    if (in_minus) {
      const double ratio = std::exp(log_f - log_f_prime);
      if (ratio > report.max_ratio_minus) {
        report.max_ratio_minus = ratio;
        report.worst_k_minus = k;
      }
    } else {
      tail_minus += std::exp(log_f);
    }
    if (in_plus) {
      const double ratio = std::exp(log_f_prime - log_f);
      if (ratio > report.max_ratio_plus) {
        report.max_ratio_plus = ratio;
        report.worst_k_plus = k;
      }
    } else {
      tail_plus += std::exp(log_f_prime);
    }
  }
  report.tail_minus = tail_minus;
  report.tail_plus = tail_plus;

  const double e_eps = std::exp(epsilon) * (1.0 + 1e-12) + 1e-12;
  const double d_bound = delta * (1.0 + 1e-12) + 1e-15;
  report.pass = report.max_ratio_minus <= e_eps &&
                report.max_ratio_plus <= e_eps && tail_minus <= d_bound &&
                tail_plus <= d_bound;
  return report;
}

BinomialAuditReport binomial_audit(int n_cluster, double p, double theta,
                                   double epsilon, double delta, double xi) {
  if (n_cluster < 1) {
    throw std::invalid_argument("binomial_audit: need n_cluster >= 1");
  }
  const int trials = static_cast<int>(std::floor(theta * n_cluster));
  if (trials < 1) {
    throw std::invalid_argument(
        "binomial_audit: t = floor(theta*n) = 0; need theta*n >= 1");
  }
  const double p_prime = p + 1.0 / static_cast<double>(n_cluster);
  return audit_binomial_pair(trials, p, p_prime, xi, epsilon, delta);
}

}  // namespace labeldp
