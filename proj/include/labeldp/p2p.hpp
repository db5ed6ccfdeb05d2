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

#ifndef LABELDP_P2P_HPP
#define LABELDP_P2P_HPP

#include <vector>

#include "labeldp/clustering.hpp"
#include "labeldp/dataset.hpp"
#include "labeldp/privacy.hpp"
#include "labeldp/rng.hpp"

namespace labeldp {

// One-round peer-to-peer label exchange for binary labels: each user flips
// her own label with probability alpha, fetches the flipped label of a
// uniformly chosen user in her cluster (possibly herself), reports that
// label, and is included in the output with probability theta.
//
// The exchange is simulated in-process as a message table; the privacy
// object is the learner's view of the output dataset, so transport adds
// nothing testable. The trace format would survive a real transport layer
// unchanged.
struct P2PParams {
  double alpha = 0.0;  // label flip probability, in [0, 1]
  double theta = 1.0;  // subsampling rate, in [0, 1]
  double xi = 0.0;     // accountant tail parameter (see default_xi)
  int s = 0;           // minimum cluster size the accountant may assume
};

// Accountant schedule: alpha = 4*sqrt(2)*ln(s)/sqrt(theta*s) and
// xi = 4*sqrt(ln s), the settings under which delta stays below 1/s^2.
// schedule_alpha throws when the formula lands above 1/2 (flipping beyond
// 1/2 inverts labels and leaves the accountant's regime), naming the
// smallest s that works for the requested theta.
double schedule_alpha(int s, double theta);
double default_xi(int s);

// Per-user record of the exchange round.
struct ExchangeRecord {
  int own_label = 0;
  int flipped_label = 0;
  int peer = 0;
  int reported_label = 0;
  bool included = false;
};

struct P2PResult {
  LabeledDataset noisy_data;  // subsampled rows; may be empty when theta = 0
  std::vector<ExchangeRecord> trace;
  std::vector<int> included_rows;  // original indices of the output rows
  PrivacyReceipt receipt;
};

// Runs the exchange. Requires K = 2 and non-empty clusters. The receipt is
// the exact accountant value when (s, theta, alpha, xi) satisfy its
// preconditions, and an infinite-epsilon "no guarantee" receipt otherwise
// (e.g. alpha = 0); the standalone accountant below still rejects such
// parameters loudly.
P2PResult run_p2p(const LabeledDataset& data, const ClusterAssignment& assign,
                  const P2PParams& params, const RngStream& rng);

// Exact accountant for the exchange:
//   epsilon = theta*log(e + 3/(s*alpha)) + sqrt(theta)*xi*log(1 + 3/sqrt(s*alpha))
//   delta   = exp(-alpha*xi^2 / (4*(alpha + 1/s)*(1 - alpha)))
// Preconditions: s*alpha >= 2 and xi in [0, 3*alpha*sqrt(theta*s*(1-alpha))].
PrivacyReceipt p2p_privacy(int s, double theta, double alpha, double xi);

// Privacy from the viewpoint of the single receiving peer:
// log((1-alpha)/alpha), for alpha in (0, 1/2].
double per_peer_view_epsilon(double alpha);

struct ApproxCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

// Numeric check of the accountant's core inequality
// (1 + sgn/x)^(sgn * x^a) <= e^(2a-1) + 3/x^a for x >= 2, sgn in {-1, +1},
// a in {1/2, 1}.
ApproxCheck check_exp_approx(double x, int sgn, double a);

// Exact binomial audit of the accountant's obligations. For trial count
// t = floor(theta * n) and success probabilities p and p' = p + 1/n, checks
// the likelihood ratios f(k;t,p)/f(k;t,p') on S- = {k >= t*p - xi*sqrt(t*q)}
// (and the reverse ratio on S+ = {k <= t*p + xi*sqrt(t*p)}) against e^eps,
// and the two tail masses against delta. pmfs go through log-gamma.
struct BinomialAuditReport {
  bool pass = false;
  int trials = 0;           // t
  double p = 0.0;           // positive fraction under D
  double p_prime = 0.0;     // under the label neighbor D'
  double max_ratio_minus = 0.0;  // worst f(k;t,p)/f(k;t,p') on S-
  int worst_k_minus = -1;
  double max_ratio_plus = 0.0;   // worst f(k;t,p')/f(k;t,p) on S+
  int worst_k_plus = -1;
  double tail_minus = 0.0;  // mass of f(.;t,p) outside S-
  double tail_plus = 0.0;   // mass of f(.;t,p') outside S+
  double epsilon_bound = 0.0;
  double delta_bound = 0.0;
};

BinomialAuditReport binomial_audit(int n_cluster, double p, double theta,
                                   double epsilon, double delta, double xi);

// Core of the audit with an explicit neighbor probability; binomial_audit
// forwards with p' = p + 1/n. Exposed so degenerate p' = p checks can run.
BinomialAuditReport audit_binomial_pair(int trials, double p, double p_prime,
                                        double xi, double epsilon,
                                        double delta);

}  // namespace labeldp

#endif  // LABELDP_P2P_HPP
