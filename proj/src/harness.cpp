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

#include "labeldp/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "labeldp/central.hpp"
#include "labeldp/metrics.hpp"

namespace labeldp {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_g(double v, int digits = 9) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

void reject_unknown_keys(const json& obj, const std::string& where,
                         std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* key) {
          return it.key() == key;
        }) == allowed.end()) {
      throw std::invalid_argument("sweep config: unknown key `" + it.key() +
                                  "` in " + where);
    }
  }
}

double epsilon_from_json(const json& v) {
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return kInfinity;
    throw std::invalid_argument(
        "sweep config: epsilon entries must be numbers or \"inf\"");
  }
  if (!v.is_number()) {
    throw std::invalid_argument("sweep config: epsilon entries must be numbers");
  }
  const double e = v.get<double>();
  if (!(e > 0.0)) {
    throw std::invalid_argument("sweep config: epsilon entries must be > 0");
  }
  return e;
}

}  // namespace

std::string mechanism_name(SweepMechanism m) {
  switch (m) {
    case SweepMechanism::kUniformRR:
      return "uniform_rr";
    case SweepMechanism::kClusterRR:
      return "cluster_rr";
  }
  return "unknown";
}

SweepConfig parse_sweep_config(const std::string& json_text) {
  json root = json::parse(json_text);
  if (!root.is_object()) {
    throw std::invalid_argument("sweep config: top level must be an object");
  }
  reject_unknown_keys(root, "top level",
                      {"train", "test", "cluster_counts", "epsilons",
                       "mechanisms", "trials", "seed", "phi", "classes",
                       "hyperparams", "kmeans", "out_dir"});
  SweepConfig config;
  config.train_path = root.at("train").get<std::string>();
  config.test_path = root.at("test").get<std::string>();
  for (const auto& v : root.at("cluster_counts")) {
    config.cluster_counts.push_back(v.get<int>());
  }
  for (const auto& v : root.at("epsilons")) {
    config.epsilons.push_back(epsilon_from_json(v));
  }
  config.mechanisms.clear();
  for (const auto& v : root.at("mechanisms")) {
    const std::string name = v.get<std::string>();
    if (name == "uniform_rr") {
      config.mechanisms.push_back(SweepMechanism::kUniformRR);
    } else if (name == "cluster_rr") {
      config.mechanisms.push_back(SweepMechanism::kClusterRR);
    } else {
      throw std::invalid_argument("sweep config: unknown mechanism `" + name +
                                  "` (expected uniform_rr or cluster_rr)");
    }
  }
  if (root.contains("trials")) config.trials = root["trials"].get<int>();
  if (root.contains("seed")) config.seed = root["seed"].get<std::uint64_t>();
  if (root.contains("classes")) config.num_classes = root["classes"].get<int>();
  if (root.contains("phi")) {
    const auto& phi = root["phi"];
    if (phi.is_string()) {
      if (phi.get<std::string>() != "proxy") {
        throw std::invalid_argument(
            "sweep config: phi must be a number or \"proxy\"");
      }
      config.use_phi_proxy = true;
    } else {
      config.phi = phi.get<double>();
      if (!(config.phi > 0.0)) {
        throw std::invalid_argument("sweep config: phi must be > 0");
      }
    }
  }
  if (root.contains("hyperparams")) {
    const json& hp = root["hyperparams"];
    reject_unknown_keys(hp, "hyperparams", {"lr", "epochs", "batch", "l2"});
    if (hp.contains("lr")) config.hyperparams.lr = hp["lr"].get<double>();
    if (hp.contains("epochs")) config.hyperparams.epochs = hp["epochs"].get<int>();
    if (hp.contains("batch")) config.hyperparams.batch = hp["batch"].get<int>();
    if (hp.contains("l2")) config.hyperparams.l2 = hp["l2"].get<double>();
  }
  if (root.contains("kmeans")) {
    const json& km = root["kmeans"];
    reject_unknown_keys(km, "kmeans", {"max_iters", "tol", "plusplus"});
    if (km.contains("max_iters")) config.kmeans.max_iters = km["max_iters"].get<int>();
    if (km.contains("tol")) config.kmeans.tol = km["tol"].get<double>();
    if (km.contains("plusplus")) config.kmeans.plusplus_init = km["plusplus"].get<bool>();
  }
  if (root.contains("out_dir")) config.out_dir = root["out_dir"].get<std::string>();

  if (config.cluster_counts.empty() || config.epsilons.empty() ||
      config.mechanisms.empty()) {
    throw std::invalid_argument("sweep config: grids must be non-empty");
  }
  if (config.trials < 1) {
    throw std::invalid_argument("sweep config: trials must be >= 1");
  }
  return config;
}

SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_sweep_config(text);
}

namespace {

ordered_json receipt_to_json(const PrivacyReceipt& receipt) {
  ordered_json j;
  j["mechanism"] = receipt.mechanism;
  if (std::isinf(receipt.epsilon)) {
    j["epsilon"] = "inf";
  } else {
    j["epsilon"] = receipt.epsilon;
  }
  j["delta"] = receipt.delta;
  ordered_json params;
  for (const auto& [key, value] : receipt.params) {
    if (std::isinf(value)) {
      params[key] = value > 0 ? "inf" : "-inf";
    } else {
      params[key] = value;
    }
  }
  j["params"] = params;
  return j;
}

double zero_one_accuracy(const LinearHypothesis& h, const LabeledDataset& data) {
  LossSpec spec{LossKind::kZeroOne, 1.0, nullptr, nullptr};
  return 1.0 - evaluate(h, data, spec);
}

struct TidyWriter {
  std::ofstream out;
  explicit TidyWriter(const std::string& path) : out(path) {
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    // runtime_sec stays in SweepResult only: emitting wall-clock times would
    // break byte-identical reruns.
    out << "mechanism,clusters,epsilon,trial,accuracy,normalized_accuracy,"
           "epsilon_receipt,delta_receipt,phi_used,phi_proxy,min_cluster_size\n";
  }
  void row(const SweepRow& r) {
    out << r.mechanism << ',' << r.clusters << ',' << format_g(r.epsilon_target)
        << ',' << r.trial << ',' << format_g(r.accuracy) << ','
        << format_g(r.normalized_accuracy) << ',' << format_g(r.receipt.epsilon)
        << ',' << format_g(r.receipt.delta) << ',' << format_g(r.phi_used) << ','
        << format_g(r.phi_proxy) << ',' << r.min_cluster_size << '\n';
    out.flush();
  }
};

}  // namespace

SweepResult run_sweep(const SweepConfig& config) {
  if (config.cluster_counts.empty() || config.epsilons.empty() ||
      config.mechanisms.empty()) {
    throw std::invalid_argument("run_sweep: grids must be non-empty");
  }
  if (config.trials < 1) {
    throw std::invalid_argument("run_sweep: trials must be >= 1");
  }

  CsvSchema schema;
  schema.num_classes = config.num_classes;
  const CsvDataset train_csv = load_csv(config.train_path, schema);
  CsvSchema test_schema;
  test_schema.num_classes = train_csv.data.num_classes();
  const CsvDataset test_csv = load_csv(config.test_path, test_schema);
  const LabeledDataset& train_data = train_csv.data;
  const LabeledDataset& test_data = test_csv.data;
  const int k = train_data.num_classes();

  SweepResult result;
  // Clean baseline: trained once on the original labels, shared by every
  // normalization.
  TrainOptions base_hp = config.hyperparams;
  base_hp.seed = RngStream(config.seed).derive(rng_tag::kTrial, 0xba5e).next_u64();
  LossSpec plain{LossKind::kCrossEntropy, 1.0, nullptr, nullptr};
  const LinearHypothesis baseline = train(train_data, plain, base_hp);
  result.baseline_accuracy = zero_one_accuracy(baseline, test_data);

  std::optional<TidyWriter> tidy;
  std::optional<std::ofstream> receipts;
  if (!config.out_dir.empty()) {
    std::filesystem::create_directories(config.out_dir);
    tidy.emplace(config.out_dir + "/tidy.csv");
    receipts.emplace(config.out_dir + "/receipts.jsonl");
    if (!*receipts) {
      throw std::runtime_error(config.out_dir + "/receipts.jsonl: cannot open");
    }
  }

  for (int count : config.cluster_counts) {
    const RngStream cluster_seed =
        RngStream(config.seed).derive(rng_tag::kKMeans, static_cast<uint64_t>(count));
    const KMeansResult km = kmeans(train_data, count, cluster_seed, config.kmeans);
    const ClusterAssignment& assign = km.assignment;
    const double proxy = empirical_heterogeneity_proxy(train_data, assign);
    const int s = min_cluster_size(assign);

    for (SweepMechanism mech : config.mechanisms) {
      for (const double eps : config.epsilons) {
        for (int trial = 0; trial < config.trials; ++trial) {
          const auto start = std::chrono::steady_clock::now();
          double phi_used = 0.0;
          CentralParams params;
          if (mech == SweepMechanism::kUniformRR) {
            params = preset_uniform_rr(eps, k);
          } else {
            phi_used = config.use_phi_proxy
                           ? std::clamp(proxy, config.phi_floor, 1.0 / k)
                           : config.phi;
            params = preset_cluster_rr(eps, phi_used, k);
          }
          // Mechanism randomness depends only on the grid-point identity
          // (count, mech, eps value, trial), so execution order is
          // irrelevant.
          std::uint64_t eps_bits;
          static_assert(sizeof(eps_bits) == sizeof(eps));
          std::memcpy(&eps_bits, &eps, sizeof(eps_bits));
          const std::uint64_t point_id =
              static_cast<uint64_t>(count) * 2u +
              (mech == SweepMechanism::kClusterRR ? 1u : 0u);
          const RngStream mech_rng = RngStream(config.seed)
                                         .derive(rng_tag::kTrial, point_id)
                                         .derive(rng_tag::kTrial, eps_bits)
                                         .derive(rng_tag::kTrial,
                                                 static_cast<uint64_t>(trial));
          const MechanismOutput mo = run_central(train_data, assign, params, mech_rng);

          TrainOptions hp = config.hyperparams;
          hp.seed = mech_rng.derive(rng_tag::kShuffle).next_u64();
          LossSpec spec{LossKind::kCrossEntropy, 1.0, nullptr, nullptr};
          if (params.beta > 0.0) {
            spec.qinv = &mo.per_cluster_qinv;
            spec.assign = &assign;
          }
          const LinearHypothesis model = train(mo.noisy_data, spec, hp);
          const double acc = zero_one_accuracy(model, test_data);

          SweepRow row;
          row.mechanism = mechanism_name(mech);
          row.clusters = count;
          row.epsilon_target = eps;
          row.trial = trial;
          row.accuracy = acc;
          row.normalized_accuracy =
              result.baseline_accuracy > 0.0 ? acc / result.baseline_accuracy : 0.0;
          row.phi_used = phi_used;
          row.phi_proxy = proxy;
          row.min_cluster_size = s;
          row.receipt = mo.receipt;
          row.receipt.params["epsilon_target"] = eps;
          row.runtime_sec =
              std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                  .count();
          if (tidy) {
            tidy->row(row);
            ordered_json j = receipt_to_json(row.receipt);
            j["mechanism_arm"] = row.mechanism;
            j["clusters"] = row.clusters;
            j["trial"] = row.trial;
            *receipts << j.dump() << '\n';
            receipts->flush();
          }
          result.rows.push_back(std::move(row));
        }
      }
    }
  }
  if (!config.out_dir.empty()) {
    // Release the progressive writers, then emit the final files in one pass.
    tidy.reset();
    receipts.reset();
    emit_plotdata(result, config.out_dir);
  }
  return result;
}

void emit_plotdata(const SweepResult& result, const std::string& dir) {
  if (result.rows.empty()) {
    throw std::invalid_argument("emit_plotdata: empty result");
  }
  std::filesystem::create_directories(dir);
  {
    TidyWriter tidy(dir + "/tidy.csv");
    for (const SweepRow& row : result.rows) tidy.row(row);
  }
  {
    std::ofstream receipts(dir + "/receipts.jsonl");
    if (!receipts) throw std::runtime_error(dir + "/receipts.jsonl: cannot open");
    for (const SweepRow& row : result.rows) {
      ordered_json j = receipt_to_json(row.receipt);
      j["mechanism_arm"] = row.mechanism;
      j["clusters"] = row.clusters;
      j["trial"] = row.trial;
      receipts << j.dump() << '\n';
    }
  }

  // Aggregate: mean and sample std per (mechanism, clusters, epsilon).
  struct Agg {
    int n = 0;
    double acc_sum = 0.0, acc_sq = 0.0, norm_sum = 0.0, norm_sq = 0.0;
  };
  std::map<std::tuple<std::string, int, double>, Agg> groups;
  for (const SweepRow& row : result.rows) {
    Agg& agg = groups[{row.mechanism, row.clusters, row.epsilon_target}];
    ++agg.n;
    agg.acc_sum += row.accuracy;
    agg.acc_sq += row.accuracy * row.accuracy;
    agg.norm_sum += row.normalized_accuracy;
    agg.norm_sq += row.normalized_accuracy * row.normalized_accuracy;
  }
  std::ofstream agg_out(dir + "/agg.csv");
  if (!agg_out) throw std::runtime_error(dir + "/agg.csv: cannot open");
  agg_out << "mechanism,clusters,epsilon,trials,mean_accuracy,std_accuracy,"
             "mean_normalized,std_normalized\n";
  for (const auto& [key, agg] : groups) {
    const auto& [mech, clusters, eps] = key;
    const double mean_acc = agg.acc_sum / agg.n;
    const double mean_norm = agg.norm_sum / agg.n;
    double std_acc = 0.0, std_norm = 0.0;
    if (agg.n > 1) {
      std_acc = std::sqrt(std::max(0.0, (agg.acc_sq - agg.n * mean_acc * mean_acc) /
                                            (agg.n - 1)));
      std_norm = std::sqrt(std::max(0.0, (agg.norm_sq - agg.n * mean_norm * mean_norm) /
                                             (agg.n - 1)));
    }
    agg_out << mech << ',' << clusters << ',' << format_g(eps) << ',' << agg.n
            << ',' << format_g(mean_acc) << ',' << format_g(std_acc) << ','
            << format_g(mean_norm) << ',' << format_g(std_norm) << '\n';
  }
}

}  // namespace labeldp
