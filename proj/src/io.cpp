// SPDX-License-Identifier: Apache-2.0
//
// specband: empirical-Bayes frequency estimation for noisy multi-sinusoid signals
#include "specband/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace specband {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_panel_csv(const std::string& path, const SnapshotPanel& panel) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  const int n = panel.samples();
  for (int t = 1; t <= n; ++t) out << (t > 1 ? "," : "") << "y" << t;
  out << "\n";
  for (int k = 0; k < panel.snapshots(); ++k) {
    for (int t = 0; t < n; ++t) out << (t > 0 ? "," : "") << format_double(panel.data(k, t));
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

SnapshotPanel read_panel_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty panel file: " + path);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("ragged panel rows in: " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("panel has no snapshots: " + path);
  SnapshotPanel panel;
  panel.data.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t k = 0; k < rows.size(); ++k)
    for (std::size_t t = 0; t < rows[k].size(); ++t)
      panel.data(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(t)) = rows[k][t];
  return panel;
}

namespace {

nlohmann::json matrix_rows(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json vector_values(const Eigen::VectorXd& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

}  // namespace

void write_truth_json(const std::string& path, const PanelConfig& cfg, const SnapshotPanel& panel) {
  nlohmann::json j;
  j["prior"] = {{"centers", cfg.prior.centers},
                {"half_bandwidth", cfg.prior.half_bandwidth},
                {"amp_variance", cfg.prior.amp_variance},
                {"noise_variance", cfg.prior.noise_variance}};
  j["n"] = cfg.samples_per_path;
  j["l"] = cfg.snapshot_count;
  j["amp_law"] = cfg.amp_law == AmplitudeLaw::kGaussian ? "gaussian" : "uniform";
  j["seed"] = cfg.seed;
  j["omega"] = matrix_rows(panel.truth.omega);
  j["a"] = matrix_rows(panel.truth.a);
  j["b"] = matrix_rows(panel.truth.b);
  write_json_file(path, j);
}

PanelConfig panel_config_from_json(const nlohmann::json& j) {
  PanelConfig cfg;
  cfg.prior.centers = j.at("centers").get<std::vector<double>>();
  cfg.prior.half_bandwidth = j.at("half_bandwidth").get<double>();
  cfg.prior.amp_variance = j.value("amp_variance", 1.0);
  if (j.contains("noise_variance") && j.contains("snr_db"))
    throw std::invalid_argument("panel config: give noise_variance or snr_db, not both");
  if (j.contains("snr_db"))
    cfg.prior.noise_variance = snr_to_noise_variance(j.at("snr_db").get<double>(), cfg.prior.amp_variance);
  else
    cfg.prior.noise_variance = j.value("noise_variance", 0.0);
  cfg.samples_per_path = j.at("n").get<int>();
  cfg.snapshot_count = j.at("l").get<int>();
  const std::string law = j.value("amp_law", "gaussian");
  if (law == "gaussian")
    cfg.amp_law = AmplitudeLaw::kGaussian;
  else if (law == "uniform")
    cfg.amp_law = AmplitudeLaw::kUniform;
  else
    throw std::invalid_argument("panel config: unknown amp_law '" + law + "'");
  cfg.seed = j.value("seed", 0ull);
  return cfg;
}

nlohmann::json cov_estimate_to_json(const CovEstimate& est) {
  nlohmann::json j;
  j["first_column"] = vector_values(est.sigma_hat.first_column);
  j["eigenvalues"] = vector_values(est.eigen.values);
  j["noise_floor"] = est.noise_floor;
  j["signal_variance"] = est.signal_variance;
  j["rank_hat"] = est.rank_hat;
  j["w_hat"] = est.w_hat;
  return j;
}

nlohmann::json center_estimate_to_json(const CenterEstimate& est) {
  nlohmann::json j;
  j["theta_hat"] = vector_values(est.theta_hat);
  j["w_hat"] = est.w_hat;
  j["rank_hat"] = est.rank_hat;
  j["phases"] = est.phases;
  j["weights"] = est.weights;
  j["cluster_labels"] = est.cluster_labels;
  j["flags"] = est.flags;
  return j;
}

nlohmann::json map_result_to_json(const MapResult& result) {
  nlohmann::json j;
  j["omega_map"] = vector_values(result.omega_map);
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  j["objective_trace"] = result.objective_trace;
  j["ridge_bumped"] = result.ridge_bumped;
  return j;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return nlohmann::json::parse(in);
}

}  // namespace specband
