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

// labeldp: cluster-based label differential privacy toolkit.
//
// Subcommands: cluster, metrics, privatize-central, privatize-p2p, audit-p2p,
// train, eval, lap, sweep. Every command is deterministic given --seed;
// reruns produce byte-identical outputs.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "labeldp/central.hpp"
#include "labeldp/clustering.hpp"
#include "labeldp/dataset.hpp"
#include "labeldp/harness.hpp"
#include "labeldp/lap.hpp"
#include "labeldp/learner.hpp"
#include "labeldp/metrics.hpp"
#include "labeldp/p2p.hpp"

namespace {

using labeldp::ClusterAssignment;
using labeldp::CsvDataset;
using labeldp::CsvSchema;
using labeldp::LabeledDataset;
using labeldp::RngStream;
using nlohmann::ordered_json;

double parse_double_or_inf(const std::string& text, const char* what) {
  if (text == "inf" || text == "INF" || text == "infinity") {
    return labeldp::kInfinity;
  }
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size()) {
    throw CLI::ValidationError(std::string(what) + ": cannot parse `" + text + "`");
  }
  return v;
}

ordered_json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

ordered_json receipt_to_json(const labeldp::PrivacyReceipt& receipt) {
  ordered_json j;
  j["mechanism"] = receipt.mechanism;
  j["epsilon"] = number_or_inf(receipt.epsilon);
  j["delta"] = receipt.delta;
  ordered_json params;
  for (const auto& [key, value] : receipt.params) params[key] = number_or_inf(value);
  j["params"] = params;
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << text;
}

void emit_json(const ordered_json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text(out_path, text);
  }
}

// Cluster ids from --clusters file or the input's own `cluster` column.
ClusterAssignment resolve_clusters(const CsvDataset& csv,
                                   const std::string& clusters_path) {
  if (!clusters_path.empty()) {
    return labeldp::attach_clusters(csv.data, labeldp::load_cluster_csv(clusters_path));
  }
  if (csv.cluster_ids.has_value()) {
    return labeldp::attach_clusters(csv.data, *csv.cluster_ids);
  }
  throw CLI::ValidationError(
      "no cluster assignment: pass --clusters or include a `cluster` column");
}

struct IoFlags {
  std::string input;
  std::string clusters;
  int classes = 0;
};

void add_io_flags(CLI::App* cmd, IoFlags& io) {
  cmd->add_option("--input", io.input, "input dataset CSV")->required();
  cmd->add_option("--clusters", io.clusters,
                  "single-column cluster CSV aligned with input rows "
                  "(or include a `cluster` column in the input)");
  cmd->add_option("--classes", io.classes,
                  "label-space size K (default: infer from labels)");
}

int cmd_cluster(const std::string& input, int k, std::uint64_t seed,
                const std::string& out, int max_iters, double tol,
                bool random_init) {
  const CsvDataset csv = labeldp::load_csv(input);
  labeldp::KMeansOptions opts;
  opts.max_iters = max_iters;
  opts.tol = tol;
  opts.plusplus_init = !random_init;
  const auto result = labeldp::kmeans(csv.data, k, RngStream(seed), opts);
  labeldp::write_cluster_csv(out, result.assignment.cluster_of);
  std::cerr << "clustered n=" << csv.data.n() << " into k=" << k
            << " (min cluster size " << labeldp::min_cluster_size(result.assignment)
            << ")\n";
  return 0;
}

int cmd_metrics(const IoFlags& io, const std::string& out_path) {
  CsvSchema schema;
  schema.num_classes = io.classes;
  schema.parse_features = false;
  const CsvDataset csv = labeldp::load_csv(io.input, schema);
  const ClusterAssignment assign = resolve_clusters(csv, io.clusters);
  ordered_json j;
  j["phi_proxy"] = labeldp::empirical_heterogeneity_proxy(csv.data, assign);
  j["per_cluster_tv"] = labeldp::per_cluster_proxy_tv(csv.data, assign);
  j["min_cluster_size"] = labeldp::min_cluster_size(assign);
  emit_json(j, out_path);
  return 0;
}

int cmd_privatize_central(const IoFlags& io, const std::string& preset,
                          double epsilon, double phi, const std::string& tau,
                          const std::string& sigma, const std::string& lambda,
                          const std::string& beta, std::uint64_t seed,
                          const std::string& out, const std::string& qinv_path) {
  CsvSchema schema;
  schema.num_classes = io.classes;
  schema.parse_features = false;
  const CsvDataset csv = labeldp::load_csv(io.input, schema);
  const ClusterAssignment assign = resolve_clusters(csv, io.clusters);
  const int k = csv.data.num_classes();

  labeldp::CentralParams params;
  double epsilon_target = std::numeric_limits<double>::quiet_NaN();
  if (preset == "uniform") {
    params = labeldp::preset_uniform_rr(epsilon, k);
    epsilon_target = epsilon;
  } else if (preset == "cluster") {
    if (!(phi > 0.0)) {
      throw CLI::ValidationError("--preset cluster requires --phi > 0");
    }
    params = labeldp::preset_cluster_rr(epsilon, phi, k);
    epsilon_target = epsilon;
  } else if (preset.empty()) {
    if (tau.empty() || sigma.empty() || lambda.empty() || beta.empty()) {
      throw CLI::ValidationError(
          "without --preset, all of --tau --sigma --lambda --beta are required");
    }
    params.tau = parse_double_or_inf(tau, "--tau");
    params.sigma = parse_double_or_inf(sigma, "--sigma");
    params.lambda = parse_double_or_inf(lambda, "--lambda");
    params.beta = parse_double_or_inf(beta, "--beta");
  } else {
    throw CLI::ValidationError("--preset must be `uniform` or `cluster`");
  }

  const auto output = labeldp::run_central(csv.data, assign, params, RngStream(seed));
  labeldp::PrivacyReceipt receipt = output.receipt;
  if (!std::isnan(epsilon_target)) receipt.params["epsilon_target"] = epsilon_target;

  labeldp::rewrite_labels_csv(io.input, out, output.noisy_data.labels(), {},
                              csv.label_names);

  // Per-cluster inverse randomization matrices plus parameters and receipt.
  const auto dists = labeldp::noisy_distributions(csv.data, assign, params.tau,
                                                  params.sigma, RngStream(seed));
  ordered_json j;
  j["mechanism"] = "central";
  j["num_classes"] = k;
  j["num_clusters"] = assign.num_clusters;
  ordered_json params_json;
  params_json["tau"] = number_or_inf(params.tau);
  params_json["sigma"] = number_or_inf(params.sigma);
  params_json["lambda"] = number_or_inf(params.lambda);
  params_json["beta"] = number_or_inf(params.beta);
  j["params"] = params_json;
  j["receipt"] = receipt_to_json(receipt);
  if (!csv.label_names.empty()) j["label_names"] = csv.label_names;
  ordered_json q_tilde = ordered_json::array();
  for (int c = 0; c < assign.num_clusters; ++c) {
    const auto row = dists.q_tilde_row(c);
    q_tilde.push_back(std::vector<double>(row.begin(), row.end()));
  }
  j["q_tilde"] = q_tilde;
  ordered_json q_inv = ordered_json::array();
  for (const auto& mat : output.per_cluster_qinv) {
    ordered_json rows = ordered_json::array();
    for (int r = 0; r < mat.q_inv.size; ++r) {
      std::vector<double> row(static_cast<size_t>(mat.q_inv.size));
      for (int col = 0; col < mat.q_inv.size; ++col) row[static_cast<size_t>(col)] = mat.q_inv.at(r, col);
      rows.push_back(row);
    }
    q_inv.push_back(rows);
  }
  j["q_inv"] = q_inv;
  write_text(qinv_path, j.dump(2) + "\n");

  std::cerr << "privatized n=" << csv.data.n() << "; receipt epsilon="
            << receipt.epsilon << "\n";
  return 0;
}

int cmd_privatize_p2p(const IoFlags& io, double theta, double alpha,
                      bool auto_alpha, double xi, bool xi_set,
                      std::uint64_t seed, const std::string& out,
                      const std::string& receipt_path,
                      const std::string& trace_path) {
  CsvSchema schema;
  schema.num_classes = io.classes;
  schema.parse_features = false;
  const CsvDataset csv = labeldp::load_csv(io.input, schema);
  const ClusterAssignment assign = resolve_clusters(csv, io.clusters);
  const int s = labeldp::min_cluster_size(assign);

  labeldp::P2PParams params;
  params.theta = theta;
  params.s = s;
  params.alpha = auto_alpha ? labeldp::schedule_alpha(s, theta) : alpha;
  if (xi_set) {
    params.xi = xi;
  } else {
    const double xi_max =
        3.0 * params.alpha * std::sqrt(theta * s * (1.0 - params.alpha));
    params.xi = std::min(labeldp::default_xi(std::max(2, s)), xi_max);
  }

  const auto result = labeldp::run_p2p(csv.data, assign, params, RngStream(seed));

  std::vector<bool> keep(static_cast<size_t>(csv.data.n()), false);
  std::vector<int> labels(static_cast<size_t>(csv.data.n()), 0);
  for (int i = 0; i < csv.data.n(); ++i) {
    labels[static_cast<size_t>(i)] = result.trace[static_cast<size_t>(i)].reported_label;
    keep[static_cast<size_t>(i)] = result.trace[static_cast<size_t>(i)].included;
  }
  labeldp::rewrite_labels_csv(io.input, out, labels, keep, csv.label_names);

  if (!receipt_path.empty()) {
    ordered_json j = receipt_to_json(result.receipt);
    j["included"] = static_cast<int>(result.included_rows.size());
    j["n"] = csv.data.n();
    write_text(receipt_path, j.dump(2) + "\n");
  }
  if (!trace_path.empty()) {
    std::ofstream trace(trace_path);
    if (!trace) throw std::runtime_error(trace_path + ": cannot open for writing");
    for (int i = 0; i < csv.data.n(); ++i) {
      const auto& rec = result.trace[static_cast<size_t>(i)];
      ordered_json j;
      j["i"] = i;
      j["y"] = rec.own_label;
      j["flipped"] = rec.flipped_label;
      j["peer"] = rec.peer;
      j["reported"] = rec.reported_label;
      j["included"] = rec.included;
      trace << j.dump() << '\n';
    }
  }
  std::cerr << "p2p exchange over n=" << csv.data.n() << "; kept "
            << result.included_rows.size() << " rows; alpha=" << params.alpha
            << "\n";
  return 0;
}

int cmd_audit_p2p(int s, double theta, double alpha, double xi, bool xi_set,
                  bool grid, int n_single, double p_single,
                  const std::string& out_path) {
  const double xi_max = 3.0 * alpha * std::sqrt(theta * s * (1.0 - alpha));
  const double xi_used =
      xi_set ? xi : std::min(labeldp::default_xi(std::max(2, s)), xi_max);
  const auto receipt = labeldp::p2p_privacy(s, theta, alpha, xi_used);

  ordered_json j;
  j["s"] = s;
  j["theta"] = theta;
  j["alpha"] = alpha;
  j["xi"] = xi_used;
  j["epsilon"] = receipt.epsilon;
  j["delta"] = receipt.delta;
  ordered_json checks = ordered_json::array();
  bool all_pass = true;
  double worst_ratio = 0.0;
  ordered_json worst;

  std::vector<std::pair<int, double>> points;
  if (grid) {
    for (const int n : {s, 2 * s, 4 * s}) {
      for (double p : {alpha, 0.25, 0.5, 0.75, 1.0 - alpha}) {
        p = std::clamp(p, alpha, 1.0 - alpha);
        points.emplace_back(n, p);
      }
    }
  } else {
    points.emplace_back(n_single > 0 ? n_single : s, p_single);
  }
  for (const auto& [n, p] : points) {
    const auto report =
        labeldp::binomial_audit(n, p, theta, receipt.epsilon, receipt.delta, xi_used);
    ordered_json entry;
    entry["n"] = n;
    entry["p"] = p;
    entry["t"] = report.trials;
    entry["ratio_minus"] = report.max_ratio_minus;
    entry["worst_k_minus"] = report.worst_k_minus;
    entry["ratio_plus"] = report.max_ratio_plus;
    entry["worst_k_plus"] = report.worst_k_plus;
    entry["tail_minus"] = report.tail_minus;
    entry["tail_plus"] = report.tail_plus;
    entry["pass"] = report.pass;
    checks.push_back(entry);
    all_pass = all_pass && report.pass;
    const double ratio = std::max(report.max_ratio_minus, report.max_ratio_plus);
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      worst = entry;
    }
  }
  j["e_epsilon"] = std::exp(receipt.epsilon);
  j["checks"] = checks;
  j["worst"] = worst;
  j["pass"] = all_pass;
  emit_json(j, out_path);
  return all_pass ? 0 : 1;
}

int cmd_train(const IoFlags& io, const std::string& qinv_path,
              const std::string& loss, double cap,
              const labeldp::TrainOptions& hp, const std::string& out) {
  CsvSchema schema;
  schema.num_classes = io.classes;
  const CsvDataset csv = labeldp::load_csv(io.input, schema);

  labeldp::LossSpec spec;
  spec.cap = cap;
  // zero-one-eval trains on the cross-entropy surrogate and reports the
  // zero-one training error afterwards (zero-one itself has no gradient).
  if (loss == "ce" || loss == "zero-one-eval") {
    spec.kind = labeldp::LossKind::kCrossEntropy;
  } else if (loss == "trunc-ce") {
    spec.kind = labeldp::LossKind::kTruncatedCe;
  } else {
    throw CLI::ValidationError(
        "--loss must be `ce`, `trunc-ce`, or `zero-one-eval` for training");
  }

  std::vector<labeldp::RandomizationMatrix> matrices;
  std::optional<ClusterAssignment> assign;
  if (!qinv_path.empty()) {
    std::ifstream in(qinv_path);
    if (!in) throw std::runtime_error(qinv_path + ": cannot open file");
    const auto j = nlohmann::json::parse(in);
    const int k = j.at("num_classes").get<int>();
    if (k != csv.data.num_classes()) {
      throw std::runtime_error("qinv num_classes does not match dataset K");
    }
    const double beta = j.at("params").at("beta").get<double>();
    for (const auto& mat_json : j.at("q_inv")) {
      labeldp::RandomizationMatrix mat;
      mat.beta = beta;
      mat.q_inv = labeldp::SquareMatrix(k);
      for (int r = 0; r < k; ++r) {
        for (int c = 0; c < k; ++c) {
          mat.q_inv.at(r, c) = mat_json.at(static_cast<size_t>(r)).at(static_cast<size_t>(c)).get<double>();
        }
      }
      matrices.push_back(std::move(mat));
    }
    assign = resolve_clusters(csv, io.clusters);
    spec.qinv = &matrices;
    spec.assign = &*assign;
  }

  const labeldp::LinearHypothesis model = labeldp::train(csv.data, spec, hp);
  ordered_json j;
  j["num_classes"] = model.num_classes;
  j["dim"] = model.dim;
  ordered_json weights = ordered_json::array();
  for (int y = 0; y < model.num_classes; ++y) {
    std::vector<double> row(model.weights.begin() + static_cast<long>(y) * model.dim,
                            model.weights.begin() + static_cast<long>(y + 1) * model.dim);
    weights.push_back(row);
  }
  j["weights"] = weights;
  j["bias"] = model.bias;
  ordered_json hp_json;
  hp_json["lr"] = hp.lr;
  hp_json["epochs"] = hp.epochs;
  hp_json["batch"] = hp.batch;
  hp_json["l2"] = hp.l2;
  hp_json["seed"] = hp.seed;
  j["hyperparams"] = hp_json;
  if (!csv.label_names.empty()) j["label_names"] = csv.label_names;
  write_text(out, j.dump(2) + "\n");
  std::cerr << "trained on n=" << csv.data.n() << " (K=" << model.num_classes
            << ", d=" << model.dim << ")";
  if (loss == "zero-one-eval") {
    labeldp::LossSpec zero_one{labeldp::LossKind::kZeroOne, 1.0, nullptr, nullptr};
    std::cerr << "; zero-one training error "
              << labeldp::evaluate(model, csv.data, zero_one);
  }
  std::cerr << "\n";
  return 0;
}

int cmd_eval(const std::string& model_path, const std::string& test_path,
             const std::string& loss, double cap, const std::string& out_path) {
  std::ifstream in(model_path);
  if (!in) throw std::runtime_error(model_path + ": cannot open file");
  const auto j = nlohmann::json::parse(in);
  labeldp::LinearHypothesis model;
  model.num_classes = j.at("num_classes").get<int>();
  model.dim = j.at("dim").get<int>();
  for (const auto& row : j.at("weights")) {
    for (const auto& v : row) model.weights.push_back(v.get<double>());
  }
  model.bias = j.at("bias").get<std::vector<double>>();

  CsvSchema schema;
  schema.num_classes = model.num_classes;
  const CsvDataset csv = labeldp::load_csv(test_path, schema);

  labeldp::LossSpec spec;
  spec.cap = cap;
  if (loss == "zero-one") {
    spec.kind = labeldp::LossKind::kZeroOne;
  } else if (loss == "ce") {
    spec.kind = labeldp::LossKind::kCrossEntropy;
  } else if (loss == "trunc-ce") {
    spec.kind = labeldp::LossKind::kTruncatedCe;
  } else {
    throw CLI::ValidationError("--loss must be zero-one, ce, or trunc-ce");
  }
  const double value = labeldp::evaluate(model, csv.data, spec);
  ordered_json out;
  out["loss"] = loss;
  out["value"] = value;
  if (loss == "zero-one") out["accuracy"] = 1.0 - value;
  out["n"] = csv.data.n();
  emit_json(out, out_path);
  return 0;
}

std::vector<double> parse_epsilon_grid(const std::string& text) {
  // start:stop:count, geometrically spaced; or a single value.
  std::vector<double> grid;
  const auto first = text.find(':');
  if (first == std::string::npos) {
    grid.push_back(std::stod(text));
    return grid;
  }
  const auto second = text.find(':', first + 1);
  if (second == std::string::npos) {
    throw CLI::ValidationError("--epsilon-grid expects start:stop:count");
  }
  const double start = std::stod(text.substr(0, first));
  const double stop = std::stod(text.substr(first + 1, second - first - 1));
  const int count = std::stoi(text.substr(second + 1));
  if (!(start > 0.0) || !(stop >= start) || count < 1) {
    throw CLI::ValidationError("--epsilon-grid: need 0 < start <= stop, count >= 1");
  }
  if (count == 1) {
    grid.push_back(start);
    return grid;
  }
  const double ratio = std::pow(stop / start, 1.0 / (count - 1));
  for (int i = 0; i < count; ++i) grid.push_back(start * std::pow(ratio, i));
  return grid;
}

int cmd_lap(int C, int s, int K, const std::string& epsilon_grid, int trials,
            std::uint64_t seed, const std::string& out_path) {
  ordered_json points = ordered_json::array();
  bool all_pass = true;
  const std::vector<double> grid = parse_epsilon_grid(epsilon_grid);
  for (size_t gi = 0; gi < grid.size(); ++gi) {
    const double eps = grid[gi];
    const auto point = labeldp::run_lap_bench(
        C, s, K, eps, trials,
        RngStream(seed).derive(labeldp::rng_tag::kTrial, gi));
    ordered_json entry;
    entry["epsilon"] = point.epsilon;
    entry["precision"] = point.precision;
    entry["recall"] = point.recall;
    entry["product"] = point.product;
    entry["std_error"] = point.std_error;
    entry["bound"] = point.verdict.bound;
    entry["margin"] = point.verdict.margin;
    entry["pass"] = point.verdict.pass;
    points.push_back(entry);
    all_pass = all_pass && point.verdict.pass;
  }
  ordered_json j;
  j["C"] = C;
  j["s"] = s;
  j["K"] = K;
  j["trials"] = trials;
  j["points"] = points;
  j["pass"] = all_pass;
  emit_json(j, out_path);
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cluster-based label differential privacy toolkit"};
  app.require_subcommand(1);

  // cluster
  auto* cluster = app.add_subcommand("cluster", "k-means over feature vectors");
  std::string cl_input, cl_out;
  int cl_k = 100;
  std::uint64_t cl_seed = 0;
  int cl_max_iters = 100;
  double cl_tol = 1e-6;
  bool cl_random_init = false;
  cluster->add_option("--input", cl_input)->required();
  cluster->add_option("--k", cl_k)->required();
  cluster->add_option("--seed", cl_seed);
  cluster->add_option("--out", cl_out)->required();
  cluster->add_option("--max-iters", cl_max_iters);
  cluster->add_option("--tol", cl_tol);
  cluster->add_flag("--random-init", cl_random_init,
                    "uniform seeding instead of k-means++");

  // metrics
  auto* metrics = app.add_subcommand("metrics", "cluster-quality measures");
  IoFlags metrics_io;
  std::string metrics_out;
  bool metrics_json = false;
  add_io_flags(metrics, metrics_io);
  metrics->add_flag("--json", metrics_json, "emit JSON (always on)");
  metrics->add_option("--out", metrics_out, "write JSON here instead of stdout");

  // privatize-central
  auto* central = app.add_subcommand("privatize-central",
                                     "centralized cluster-based randomized response");
  IoFlags central_io;
  std::string central_preset, central_tau, central_sigma, central_lambda,
      central_beta, central_out, central_qinv;
  double central_eps = 0.0, central_phi = 0.0;
  std::uint64_t central_seed = 0;
  add_io_flags(central, central_io);
  central->add_option("--preset", central_preset, "uniform | cluster");
  central->add_option("--epsilon", central_eps, "target epsilon for presets");
  central->add_option("--phi", central_phi, "cluster heterogeneity for --preset cluster");
  central->add_option("--tau", central_tau, "manual clip threshold");
  central->add_option("--sigma", central_sigma, "manual noise scale (accepts `inf`)");
  central->add_option("--lambda", central_lambda, "manual resampling probability");
  central->add_option("--beta", central_beta, "manual bias-correction parameter");
  central->add_option("--seed", central_seed);
  central->add_option("--out", central_out)->required();
  central->add_option("--qinv", central_qinv)->required();

  // privatize-p2p
  auto* p2p = app.add_subcommand("privatize-p2p",
                                 "one-round peer-to-peer label exchange (binary labels)");
  IoFlags p2p_io;
  double p2p_theta = 1.0, p2p_alpha = 0.0, p2p_xi = 0.0;
  bool p2p_auto_alpha = false;
  std::uint64_t p2p_seed = 0;
  std::string p2p_out, p2p_receipt, p2p_trace;
  add_io_flags(p2p, p2p_io);
  p2p->add_option("--theta", p2p_theta, "subsampling rate")->required();
  auto* alpha_opt = p2p->add_option("--alpha", p2p_alpha, "label flip probability");
  p2p->add_flag("--auto-alpha", p2p_auto_alpha,
                "use the accountant schedule 4*sqrt(2)*ln(s)/sqrt(theta*s)");
  auto* xi_opt = p2p->add_option("--xi", p2p_xi, "accountant tail parameter");
  p2p->add_option("--seed", p2p_seed);
  p2p->add_option("--out", p2p_out)->required();
  p2p->add_option("--receipt", p2p_receipt);
  p2p->add_option("--trace", p2p_trace);

  // audit-p2p
  auto* audit = app.add_subcommand("audit-p2p",
                                   "exact binomial audit of the p2p accountant");
  int audit_s = 0, audit_n = 0;
  double audit_theta = 1.0, audit_alpha = 0.0, audit_xi = 0.0, audit_p = 0.5;
  bool audit_grid = false;
  std::string audit_out;
  audit->add_option("--s", audit_s, "minimum cluster size")->required();
  audit->add_option("--theta", audit_theta)->required();
  audit->add_option("--alpha", audit_alpha)->required();
  auto* audit_xi_opt = audit->add_option("--xi", audit_xi);
  audit->add_flag("--grid", audit_grid, "audit n in {s,2s,4s} x p grid");
  audit->add_option("--n", audit_n, "single-point cluster size (default s)");
  audit->add_option("--p", audit_p, "single-point positive fraction");
  audit->add_option("--out", audit_out);

  // train
  auto* train_cmd = app.add_subcommand("train", "multinomial logistic regression");
  IoFlags train_io;
  std::string train_qinv, train_loss = "ce", train_out;
  double train_cap = 1.0;
  labeldp::TrainOptions train_hp;
  add_io_flags(train_cmd, train_io);
  train_cmd->add_option("--qinv", train_qinv, "debiasing matrices from privatize-central");
  train_cmd->add_option("--loss", train_loss, "ce | trunc-ce | zero-one-eval");
  train_cmd->add_option("--cap", train_cap, "truncation cap for trunc-ce");
  train_cmd->add_option("--lr", train_hp.lr);
  train_cmd->add_option("--epochs", train_hp.epochs);
  train_cmd->add_option("--batch", train_hp.batch);
  train_cmd->add_option("--l2", train_hp.l2);
  train_cmd->add_option("--seed", train_hp.seed);
  train_cmd->add_option("--out", train_out)->required();

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a trained model");
  std::string eval_model, eval_test, eval_loss = "zero-one", eval_out;
  double eval_cap = 1.0;
  bool eval_json = false;
  eval_cmd->add_option("--model", eval_model)->required();
  eval_cmd->add_option("--test", eval_test)->required();
  eval_cmd->add_option("--loss", eval_loss, "zero-one | ce | trunc-ce");
  eval_cmd->add_option("--cap", eval_cap);
  eval_cmd->add_flag("--json", eval_json, "emit JSON (always on)");
  eval_cmd->add_option("--out", eval_out);

  // lap
  auto* lap = app.add_subcommand("lap", "label association hardness benchmark");
  int lap_C = 100, lap_s = 10, lap_K = 100, lap_trials = 10000;
  std::string lap_grid = "0.25:8:12", lap_out;
  std::uint64_t lap_seed = 0;
  bool lap_json = false;
  lap->add_option("--C", lap_C, "clusters");
  lap->add_option("--s", lap_s, "labels per cluster");
  lap->add_option("--K", lap_K, "label-space size");
  lap->add_option("--epsilon-grid", lap_grid, "start:stop:count (geometric)");
  lap->add_option("--trials", lap_trials);
  lap->add_option("--seed", lap_seed);
  lap->add_flag("--json", lap_json, "emit JSON (always on)");
  lap->add_option("--out", lap_out);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "privacy/utility sweep from a JSON config");
  std::string sweep_config, sweep_out;
  sweep->add_option("--config", sweep_config)->required();
  sweep->add_option("--out", sweep_out, "output directory (overrides config)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cluster->parsed()) {
      return cmd_cluster(cl_input, cl_k, cl_seed, cl_out, cl_max_iters, cl_tol,
                         cl_random_init);
    }
    if (metrics->parsed()) return cmd_metrics(metrics_io, metrics_out);
    if (central->parsed()) {
      return cmd_privatize_central(central_io, central_preset, central_eps,
                                   central_phi, central_tau, central_sigma,
                                   central_lambda, central_beta, central_seed,
                                   central_out, central_qinv);
    }
    if (p2p->parsed()) {
      if (p2p_auto_alpha == (alpha_opt->count() > 0)) {
        throw CLI::ValidationError("pass exactly one of --alpha or --auto-alpha");
      }
      return cmd_privatize_p2p(p2p_io, p2p_theta, p2p_alpha, p2p_auto_alpha,
                               p2p_xi, xi_opt->count() > 0, p2p_seed, p2p_out,
                               p2p_receipt, p2p_trace);
    }
    if (audit->parsed()) {
      return cmd_audit_p2p(audit_s, audit_theta, audit_alpha, audit_xi,
                           audit_xi_opt->count() > 0, audit_grid, audit_n,
                           audit_p, audit_out);
    }
    if (train_cmd->parsed()) {
      return cmd_train(train_io, train_qinv, train_loss, train_cap, train_hp,
                       train_out);
    }
    if (eval_cmd->parsed()) {
      return cmd_eval(eval_model, eval_test, eval_loss, eval_cap, eval_out);
    }
    if (lap->parsed()) {
      return cmd_lap(lap_C, lap_s, lap_K, lap_grid, lap_trials, lap_seed, lap_out);
    }
    if (sweep->parsed()) {
      labeldp::SweepConfig config = labeldp::load_sweep_config(sweep_config);
      if (!sweep_out.empty()) config.out_dir = sweep_out;
      if (config.out_dir.empty()) {
        throw CLI::ValidationError("sweep needs --out or out_dir in the config");
      }
      const auto result = labeldp::run_sweep(config);
      std::cerr << "sweep complete: " << result.rows.size() << " rows; baseline accuracy "
                << result.baseline_accuracy << "\n";
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
