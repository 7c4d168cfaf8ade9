// SPDX-License-Identifier: Apache-2.0
//
// specband: empirical-Bayes frequency estimation for noisy multi-sinusoid signals
//
// CLI entry point.  Subcommands: signal gen, covest, estimate, map,
// kernel eig, mc run.
#include <CLI11.hpp>
#include <Eigen/Dense>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "specband/harness.hpp"
#include "specband/io.hpp"

namespace {

std::string truth_sidecar_path(const std::string& out) {
  const auto dot = out.rfind('.');
  const std::string stem = dot == std::string::npos ? out : out.substr(0, dot);
  return stem + ".truth.json";
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"specband: empirical-Bayes frequency estimation for noisy multi-sinusoid signals"};
  app.require_subcommand(1);

  // --- signal gen ---------------------------------------------------------
  auto* signal_cmd = app.add_subcommand("signal", "synthetic snapshot panels");
  signal_cmd->require_subcommand(1);
  auto* gen = signal_cmd->add_subcommand("gen", "generate a panel from a JSON config");
  std::string gen_config, gen_out;
  gen->add_option("--config", gen_config, "panel config JSON")->required()->check(CLI::ExistingFile);
  gen->add_option("--out", gen_out, "panel CSV path")->required();
  gen->callback([&] {
    const auto cfg = specband::panel_config_from_json(specband::read_json_file(gen_config));
    const auto panel = specband::generate_panel(cfg);
    specband::write_panel_csv(gen_out, panel);
    specband::write_truth_json(truth_sidecar_path(gen_out), cfg, panel);
    std::cout << "wrote " << gen_out << " (" << panel.snapshots() << " x " << panel.samples()
              << ") and " << truth_sidecar_path(gen_out) << "\n";
  });

  // --- covest -------------------------------------------------------------
  auto* covest_cmd = app.add_subcommand("covest", "covariance, noise floor, rank, bandwidth");
  std::string cov_panel, cov_out;
  int cov_nu = 1;
  int cov_search_max = 0;
  bool cov_full_search = false;
  covest_cmd->add_option("--panel", cov_panel, "panel CSV")->required()->check(CLI::ExistingFile);
  covest_cmd->add_option("--nu", cov_nu, "number of hidden frequencies")->required();
  covest_cmd->add_option("--out", cov_out, "estimate JSON path")->required();
  covest_cmd->add_option("--search-max", cov_search_max, "knee search cap (default N/2)");
  covest_cmd->add_flag("--full-search", cov_full_search, "search the knee over k in 1..N-1");
  covest_cmd->callback([&] {
    const auto panel = specband::read_panel_csv(cov_panel);
    specband::CovEstOptions opts;
    opts.search_max = cov_search_max;
    opts.full_search = cov_full_search;
    const auto est = specband::estimate_covariance(panel, cov_nu, opts);
    specband::write_json_file(cov_out, specband::cov_estimate_to_json(est));
    std::cout << "rank_hat=" << est.rank_hat << " w_hat=" << est.w_hat
              << " noise_floor=" << est.noise_floor << " -> " << cov_out << "\n";
  });

  // --- estimate -----------------------------------------------------------
  auto* est_cmd = app.add_subcommand("estimate", "subspace center-frequency estimate");
  std::string est_panel, est_out;
  int est_nu = 1, est_rank = 0, est_depth = 0;
  bool est_lloyd = false;
  est_cmd->add_option("--panel", est_panel, "panel CSV")->required()->check(CLI::ExistingFile);
  est_cmd->add_option("--nu", est_nu, "number of hidden frequencies")->required();
  est_cmd->add_option("--out", est_out, "frequency JSON path")->required();
  est_cmd->add_option("--rank", est_rank, "override the estimated rank");
  est_cmd->add_option("--shift-depth", est_depth, "Procrustes depth k (default N-1)");
  est_cmd->add_flag("--lloyd", est_lloyd, "cluster phases with Lloyd iterations");
  est_cmd->callback([&] {
    const auto panel = specband::read_panel_csv(est_panel);
    specband::SubspaceOptions opts;
    opts.rank_override = est_rank;
    opts.shift_depth = est_depth;
    if (est_lloyd) opts.cluster_method = specband::ClusterMethod::kLloyd;
    const auto centers = specband::estimate_centers(panel, est_nu, opts);
    specband::write_json_file(est_out, specband::center_estimate_to_json(centers));
    std::cout << "theta_hat = " << centers.theta_hat.transpose() << " (w_hat=" << centers.w_hat
              << ", rank=" << centers.rank_hat << ") -> " << est_out << "\n";
  });

  // --- map ----------------------------------------------------------------
  auto* map_cmd = app.add_subcommand("map", "MAP frequency refinement");
  std::string map_panel, map_out;
  std::vector<double> map_theta0;
  double map_w = 0.0, map_tol = 1e-8, map_ridge0 = 0.0;
  int map_iters = 100;
  bool map_freeze = false;
  map_cmd->add_option("--panel", map_panel, "panel CSV")->required()->check(CLI::ExistingFile);
  map_cmd->add_option("--theta0", map_theta0, "starting centers (radians)")->required()->delimiter(',');
  map_cmd->add_option("--w", map_w, "box half-width (radians)")->required();
  map_cmd->add_option("--out", map_out, "result JSON path")->required();
  map_cmd->add_option("--tol", map_tol, "convergence tolerance");
  map_cmd->add_option("--max-iters", map_iters, "iteration cap");
  map_cmd->add_option("--ridge0", map_ridge0, "initial ridge weight lambda(0)");
  map_cmd->add_flag("--freeze-amplitudes", map_freeze, "estimate amplitudes once at theta0");
  map_cmd->callback([&] {
    const auto panel = specband::read_panel_csv(map_panel);
    specband::MapProblem problem;
    problem.y = panel.data.transpose();
    problem.theta0 = to_vector(map_theta0);
    problem.w = map_w;
    problem.tol = map_tol;
    problem.max_iters = map_iters;
    problem.ridge0 = map_ridge0;
    problem.refresh_amplitudes = !map_freeze;
    const auto result = specband::map_refine(problem);
    specband::write_json_file(map_out, specband::map_result_to_json(result));
    std::cout << "omega_map = " << result.omega_map.transpose() << " ("
              << (result.converged ? "converged" : "not converged") << " in " << result.iterations
              << " iterations) -> " << map_out << "\n";
  });

  // --- kernel eig ---------------------------------------------------------
  auto* kernel_cmd = app.add_subcommand("kernel", "covariance kernel diagnostics");
  kernel_cmd->require_subcommand(1);
  auto* eig = kernel_cmd->add_subcommand("eig", "eigenvalues of the modulated-sinc covariance");
  int eig_n = 0;
  std::vector<double> eig_centers;
  double eig_w = 0.0, eig_sigma2 = 1.0, eig_noise = 0.0;
  std::string eig_out;
  eig->add_option("--n", eig_n, "matrix size N")->required();
  eig->add_option("--centers", eig_centers, "center frequencies (radians)")->required()->delimiter(',');
  eig->add_option("--w", eig_w, "half-bandwidth W (radians)")->required();
  eig->add_option("--sigma2", eig_sigma2, "amplitude variance");
  eig->add_option("--noise-var", eig_noise, "noise variance added on the diagonal");
  eig->add_option("--out", eig_out, "output CSV (index,eigenvalue)")->required();
  eig->callback([&] {
    specband::PriorHyperParams prior;
    prior.centers = eig_centers;
    prior.half_bandwidth = eig_w;
    prior.amp_variance = eig_sigma2;
    prior.noise_variance = eig_noise;
    const auto cov = eig_noise > 0.0 ? specband::build_observed_cov(prior, eig_n)
                                     : specband::build_signal_cov(prior, eig_n);
    const auto es = specband::eigen_decompose(cov);
    std::ofstream out(eig_out);
    if (!out) throw CLI::RuntimeError("cannot open " + eig_out, 1);
    out << "index,eigenvalue\n";
    for (int i = 0; i < es.size(); ++i)
      out << (i + 1) << "," << specband::format_double(es.values[i]) << "\n";
    std::cout << "wrote " << es.size() << " eigenvalues to " << eig_out << "\n";
  });

  // --- mc run -------------------------------------------------------------
  auto* mc_cmd = app.add_subcommand("mc", "Monte-Carlo campaigns");
  mc_cmd->require_subcommand(1);
  auto* run = mc_cmd->add_subcommand("run", "run a campaign from a JSON config");
  std::string mc_config, mc_out_dir;
  run->add_option("--config", mc_config, "campaign config JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--out", mc_out_dir, "output directory (overrides the config's)");
  run->callback([&] {
    auto cfg = specband::mc_config_from_json(specband::read_json_file(mc_config));
    if (!mc_out_dir.empty()) cfg.outputs = mc_out_dir;
    if (cfg.outputs.empty()) cfg.outputs = ".";
    const auto result = specband::run_campaign(cfg);
    int failures = 0;
    for (const auto& rec : result.records) failures += rec.failed ? 1 : 0;
    std::cout << result.records.size() << " trials over " << result.points.size()
              << " sweep point(s), " << failures << " failed; results under " << cfg.outputs << "\n";
  });

  try {
    CLI11_PARSE(app, argc, argv);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
