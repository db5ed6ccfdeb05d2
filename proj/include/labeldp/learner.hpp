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

#ifndef LABELDP_LEARNER_HPP
#define LABELDP_LEARNER_HPP

#include <optional>
#include <vector>

#include "labeldp/central.hpp"
#include "labeldp/clustering.hpp"
#include "labeldp/dataset.hpp"
#include "labeldp/rng.hpp"

namespace labeldp {

// Linear multiclass model: predict(x) = argmax_y (w_y . x + b_y), ties
// broken toward the smallest label index.
struct LinearHypothesis {
  int num_classes = 0;
  int dim = 0;
  std::vector<double> weights;  // row-major K x d
  std::vector<double> bias;     // length K

  static LinearHypothesis zeros(int num_classes, int dim);
  std::vector<double> scores(std::span<const double> x) const;
  int predict(std::span<const double> x) const;
};

enum class LossKind {
  kZeroOne,       // evaluation only
  kCrossEntropy,  // -log softmax_y
  kTruncatedCe,   // min(cross entropy, cap); bounded like the zero-one loss
};

// Loss specification. When qinv/assign are set, per-example loss vectors are
// reweighted by the example's cluster matrix: l~(h,x,y) =
// sum_{y'} Qinv[y',y] l(h,x,y'). Reweighted losses can be negative; nothing
// here clamps them (unbiasedness depends on the signed weights).
struct LossSpec {
  LossKind kind = LossKind::kCrossEntropy;
  double cap = 1.0;  // kTruncatedCe only
  const std::vector<RandomizationMatrix>* qinv = nullptr;
  const ClusterAssignment* assign = nullptr;  // required with qinv

  bool modified() const { return qinv != nullptr; }
};

struct TrainOptions {
  double lr = 0.1;
  int epochs = 50;
  int batch = 128;
  double l2 = 1e-4;
  std::uint64_t seed = 0;
};

// Mini-batch SGD on the (possibly reweighted) surrogate loss. Deterministic
// given (data, spec, options). Throws when the running loss turns
// non-finite, naming the hyperparameters.
LinearHypothesis train(const LabeledDataset& data, const LossSpec& spec,
                       const TrainOptions& options);

// Mean loss over the dataset; kZeroOne gives the error rate.
double evaluate(const LinearHypothesis& h, const LabeledDataset& data,
                const LossSpec& spec);

// Per-example loss values (the terms whose mean evaluate() returns).
std::vector<double> loss_values(const LinearHypothesis& h,
                                const LabeledDataset& data,
                                const LossSpec& spec);

// Zero-one excess risk against a baseline trained on clean labels with the
// same hypothesis class and budget; may be negative by sampling noise.
double excess_risk(const LinearHypothesis& h, const LabeledDataset& clean_test,
                   const LinearHypothesis& baseline);

// Mean loss and its gradient over the dataset, used by train() and exposed
// for finite-difference verification. The gradient is laid out as
// [weights (K x d row-major) | bias (K)].
struct LossGradient {
  double loss = 0.0;
  std::vector<double> grad;  // length K*d + K
};

LossGradient loss_and_gradient(const LinearHypothesis& h,
                               const LabeledDataset& data,
                               const LossSpec& spec);

}  // namespace labeldp

#endif  // LABELDP_LEARNER_HPP
