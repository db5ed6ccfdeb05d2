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

#include "labeldp/learner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace labeldp {

LinearHypothesis LinearHypothesis::zeros(int num_classes, int dim) {
  LinearHypothesis h;
  h.num_classes = num_classes;
  h.dim = dim;
  h.weights.assign(static_cast<size_t>(num_classes) * dim, 0.0);
  h.bias.assign(static_cast<size_t>(num_classes), 0.0);
  return h;
}

std::vector<double> LinearHypothesis::scores(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim) {
    throw std::invalid_argument("LinearHypothesis: feature dim mismatch");
  }
  std::vector<double> s(static_cast<size_t>(num_classes));
  for (int y = 0; y < num_classes; ++y) {
    double v = bias[static_cast<size_t>(y)];
    const double* w = weights.data() + static_cast<size_t>(y) * dim;
    for (int j = 0; j < dim; ++j) v += w[j] * x[static_cast<size_t>(j)];
    s[static_cast<size_t>(y)] = v;
  }
  return s;
}

int LinearHypothesis::predict(std::span<const double> x) const {
  const std::vector<double> s = scores(x);
  int best = 0;
  for (int y = 1; y < num_classes; ++y) {
    if (s[static_cast<size_t>(y)] > s[static_cast<size_t>(best)]) best = y;
  }
  return best;
}

namespace {

void validate_spec(const LabeledDataset& data, const LossSpec& spec) {
  if (spec.modified()) {
    if (spec.assign == nullptr) {
      throw std::invalid_argument("LossSpec: qinv requires a cluster assignment");
    }
    if (spec.assign->n() != data.n()) {
      throw std::invalid_argument(
          "LossSpec: assignment does not cover all examples");
    }
    if (spec.qinv->empty() ||
        static_cast<int>(spec.qinv->size()) < spec.assign->num_clusters) {
      throw std::invalid_argument("LossSpec: qinv matrices missing clusters");
    }
    if (spec.qinv->front().q_inv.size != data.num_classes()) {
      throw std::invalid_argument("LossSpec: qinv size does not match K");
    }
  }
  if (spec.kind == LossKind::kTruncatedCe && !(spec.cap > 0.0)) {
    throw std::invalid_argument("LossSpec: truncated_ce cap must be > 0");
  }
}

// Numerically stable log-softmax denominator.
double log_sum_exp(const std::vector<double>& s) {
  const double m = *std::max_element(s.begin(), s.end());
  double acc = 0.0;
  for (double v : s) acc += std::exp(v - m);
  return m + std::log(acc);
}

// Per-class base losses l(h, x, y') for one example.
void base_losses(const std::vector<double>& scores, const LossSpec& spec,
                 int predicted, std::vector<double>& out) {
  const int k = static_cast<int>(scores.size());
  out.resize(static_cast<size_t>(k));
  switch (spec.kind) {
    case LossKind::kZeroOne:
      for (int y = 0; y < k; ++y) out[static_cast<size_t>(y)] = predicted == y ? 0.0 : 1.0;
      break;
    case LossKind::kCrossEntropy: {
      const double lse = log_sum_exp(scores);
      for (int y = 0; y < k; ++y) out[static_cast<size_t>(y)] = lse - scores[static_cast<size_t>(y)];
      break;
    }
    case LossKind::kTruncatedCe: {
      const double lse = log_sum_exp(scores);
      for (int y = 0; y < k; ++y) {
        out[static_cast<size_t>(y)] = std::min(lse - scores[static_cast<size_t>(y)], spec.cap);
      }
      break;
    }
  }
}

int argmax_score(const std::vector<double>& s) {
  int best = 0;
  for (int y = 1; y < static_cast<int>(s.size()); ++y) {
    if (s[static_cast<size_t>(y)] > s[static_cast<size_t>(best)]) best = y;
  }
  return best;
}

double example_loss(const LinearHypothesis& h, const LabeledDataset& data,
                    const LossSpec& spec, int i, std::vector<double>& scratch) {
  const std::vector<double> s = h.scores(data.feature(i));
  const int predicted =
      spec.kind == LossKind::kZeroOne ? argmax_score(s) : -1;
  base_losses(s, spec, predicted, scratch);
  const int y = data.label(i);
  if (!spec.modified()) return scratch[static_cast<size_t>(y)];
  const int c = spec.assign->cluster_of[static_cast<size_t>(i)];
  const SquareMatrix& q_inv = (*spec.qinv)[static_cast<size_t>(c)].q_inv;
  double loss = 0.0;
  for (int yp = 0; yp < h.num_classes; ++yp) {
    loss += q_inv.at(yp, y) * scratch[static_cast<size_t>(yp)];
  }
  return loss;
}

// Gradient of the (possibly reweighted) cross-entropy surrogates with
// respect to the scores. For plain CE the target weight vector is the label
// one-hot; for a modified loss it is the Qinv column of the observed label,
// whose entries may be negative. Truncation zeroes the contribution of
// classes whose CE already exceeds the cap.
void score_gradient(const std::vector<double>& scores, const LossSpec& spec,
                    int label, int cluster, std::vector<double>& grad_s) {
  const int k = static_cast<int>(scores.size());
  grad_s.assign(static_cast<size_t>(k), 0.0);
  const double lse = log_sum_exp(scores);

  std::vector<double> weight(static_cast<size_t>(k), 0.0);
  if (spec.modified()) {
    const SquareMatrix& q_inv = (*spec.qinv)[static_cast<size_t>(cluster)].q_inv;
    for (int yp = 0; yp < k; ++yp) weight[static_cast<size_t>(yp)] = q_inv.at(yp, label);
  } else {
    weight[static_cast<size_t>(label)] = 1.0;
  }
  if (spec.kind == LossKind::kTruncatedCe) {
    for (int yp = 0; yp < k; ++yp) {
      if (lse - scores[static_cast<size_t>(yp)] >= spec.cap) {
        weight[static_cast<size_t>(yp)] = 0.0;
      }
    }
  }
  // d/ds of sum_{y'} w_{y'} (lse - s_{y'}) = (sum w) softmax - w.
  const double weight_sum =
      std::accumulate(weight.begin(), weight.end(), 0.0);
  for (int y = 0; y < k; ++y) {
    grad_s[static_cast<size_t>(y)] =
        weight_sum * std::exp(scores[static_cast<size_t>(y)] - lse) -
        weight[static_cast<size_t>(y)];
  }
}

}  // namespace

std::vector<double> loss_values(const LinearHypothesis& h,
                                const LabeledDataset& data,
                                const LossSpec& spec) {
  if (h.dim != data.dim() || h.num_classes != data.num_classes()) {
    throw std::invalid_argument("evaluate: model/dataset shape mismatch");
  }
  validate_spec(data, spec);
  std::vector<double> out(static_cast<size_t>(data.n()));
  std::vector<double> scratch;
  for (int i = 0; i < data.n(); ++i) {
    out[static_cast<size_t>(i)] = example_loss(h, data, spec, i, scratch);
  }
  return out;
}

double evaluate(const LinearHypothesis& h, const LabeledDataset& data,
                const LossSpec& spec) {
  const std::vector<double> values = loss_values(h, data, spec);
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double excess_risk(const LinearHypothesis& h, const LabeledDataset& clean_test,
                   const LinearHypothesis& baseline) {
  LossSpec zero_one{LossKind::kZeroOne, 1.0, nullptr, nullptr};
  return evaluate(h, clean_test, zero_one) -
         evaluate(baseline, clean_test, zero_one);
}

LossGradient loss_and_gradient(const LinearHypothesis& h,
                               const LabeledDataset& data,
                               const LossSpec& spec) {
  if (spec.kind == LossKind::kZeroOne) {
    throw std::invalid_argument("loss_and_gradient: zero-one loss is evaluation-only");
  }
  if (h.dim != data.dim() || h.num_classes != data.num_classes()) {
    throw std::invalid_argument("loss_and_gradient: model/dataset shape mismatch");
  }
  validate_spec(data, spec);

  const int k = h.num_classes;
  const int d = h.dim;
  LossGradient result;
  result.grad.assign(static_cast<size_t>(k) * d + k, 0.0);
  std::vector<double> grad_s;
  std::vector<double> scratch;
  for (int i = 0; i < data.n(); ++i) {
    result.loss += example_loss(h, data, spec, i, scratch);
    const std::vector<double> s = h.scores(data.feature(i));
    const int cluster =
        spec.modified() ? spec.assign->cluster_of[static_cast<size_t>(i)] : 0;
    score_gradient(s, spec, data.label(i), cluster, grad_s);
    const auto x = data.feature(i);
    for (int y = 0; y < k; ++y) {
      const double g = grad_s[static_cast<size_t>(y)];
      if (g == 0.0) continue;
      double* w_grad = result.grad.data() + static_cast<size_t>(y) * d;
      for (int j = 0; j < d; ++j) w_grad[j] += g * x[static_cast<size_t>(j)];
      result.grad[static_cast<size_t>(k) * d + y] += g;
    }
  }
  const double inv_n = 1.0 / static_cast<double>(data.n());
  result.loss *= inv_n;
  for (double& g : result.grad) g *= inv_n;
  return result;
}

LinearHypothesis train(const LabeledDataset& data, const LossSpec& spec,
                       const TrainOptions& options) {
  if (data.n() == 0) throw std::invalid_argument("train: empty dataset");
  if (spec.kind == LossKind::kZeroOne) {
    throw std::invalid_argument("train: zero-one loss is evaluation-only");
  }
  if (options.batch < 1 || options.epochs < 1 || !(options.lr > 0.0)) {
    throw std::invalid_argument("train: invalid hyperparameters");
  }
  validate_spec(data, spec);

  const int k = data.num_classes();
  const int d = data.dim();
  const int n = data.n();
  LinearHypothesis h = LinearHypothesis::zeros(k, d);
  RngStream rng(options.seed);

  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> grad_s;
  std::vector<double> scratch;
  std::vector<double> w_grad(static_cast<size_t>(k) * d);
  std::vector<double> b_grad(static_cast<size_t>(k));

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    RngStream shuffle_rng =
        rng.derive(rng_tag::kShuffle, static_cast<uint64_t>(epoch));
    for (int i = n - 1; i > 0; --i) {
      const int j = static_cast<int>(
          shuffle_rng.uniform_index(static_cast<uint64_t>(i + 1)));
      std::swap(order[static_cast<size_t>(i)], order[static_cast<size_t>(j)]);
    }
    for (int start = 0; start < n; start += options.batch) {
      const int end = std::min(n, start + options.batch);
      const double inv_m = 1.0 / static_cast<double>(end - start);
      std::fill(w_grad.begin(), w_grad.end(), 0.0);
      std::fill(b_grad.begin(), b_grad.end(), 0.0);
      double batch_loss = 0.0;
      for (int pos = start; pos < end; ++pos) {
        const int i = order[static_cast<size_t>(pos)];
        batch_loss += example_loss(h, data, spec, i, scratch);
        const std::vector<double> s = h.scores(data.feature(i));
        const int cluster =
            spec.modified() ? spec.assign->cluster_of[static_cast<size_t>(i)] : 0;
        score_gradient(s, spec, data.label(i), cluster, grad_s);
        const auto x = data.feature(i);
        for (int y = 0; y < k; ++y) {
          const double g = grad_s[static_cast<size_t>(y)];
          if (g == 0.0) continue;
          double* wg = w_grad.data() + static_cast<size_t>(y) * d;
          for (int j = 0; j < d; ++j) wg[j] += g * x[static_cast<size_t>(j)];
          b_grad[static_cast<size_t>(y)] += g;
        }
      }
      if (!std::isfinite(batch_loss)) {
        throw std::runtime_error(
            "train: diverged (non-finite loss) with lr=" +
            std::to_string(options.lr) + " epochs=" +
            std::to_string(options.epochs) + " batch=" +
            std::to_string(options.batch) + " l2=" + std::to_string(options.l2));
      }
      for (int y = 0; y < k; ++y) {
        double* w = h.weights.data() + static_cast<size_t>(y) * d;
        const double* wg = w_grad.data() + static_cast<size_t>(y) * d;
        for (int j = 0; j < d; ++j) {
          w[j] -= options.lr * (wg[j] * inv_m + options.l2 * w[j]);
        }
        h.bias[static_cast<size_t>(y)] -=
            options.lr * b_grad[static_cast<size_t>(y)] * inv_m;
      }
    }
  }
  for (double v : h.weights) {
    if (!std::isfinite(v)) {
      throw std::runtime_error(
          "train: diverged (non-finite weights) with lr=" +
          std::to_string(options.lr) + " epochs=" + std::to_string(options.epochs) +
          " batch=" + std::to_string(options.batch) + " l2=" +
          std::to_string(options.l2));
    }
  }
  return h;
}

}  // namespace labeldp
