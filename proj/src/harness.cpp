// SPDX-License-Identifier: Apache-2.0
//
// specband: empirical-Bayes frequency estimation for noisy multi-sinusoid signals
#include "specband/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "specband/io.hpp"

namespace specband {

void McConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("mc: need at least one trial");
  if (n_list.empty() || l_list.empty() || snr_list.empty())
    throw std::invalid_argument("mc: sweep lists must be nonempty");
  if (nu < 1) throw std::invalid_argument("mc: need nu >= 1");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("mc: sigma2 must be positive");
  const std::size_t points = std::max({n_list.size(), l_list.size(), snr_list.size()});
  for (std::size_t len : {n_list.size(), l_list.size(), snr_list.size()})
    if (len != 1 && len != points)
      throw std::invalid_argument("mc: sweep lists must have equal length or length 1");
}

std::vector<SweepPoint> McConfig::sweep_points() const {
  const std::size_t points = std::max({n_list.size(), l_list.size(), snr_list.size()});
  std::vector<SweepPoint> out(points);
  for (std::size_t i = 0; i < points; ++i) {
    out[i].n = n_list[n_list.size() == 1 ? 0 : i];
    out[i].l = l_list[l_list.size() == 1 ? 0 : i];
    out[i].snr_db = snr_list[snr_list.size() == 1 ? 0 : i];
  }
  return out;
}

PriorHyperParams sample_hyperparams(SplitMix64& rng, int nu, int* attempts) {
  if (nu < 1) throw std::invalid_argument("sample_hyperparams: need nu >= 1");
  PriorHyperParams prior;
  prior.half_bandwidth = rng.uniform(kTwoPi * 0.01, kTwoPi * 0.05);
  const double w = prior.half_bandwidth;
  constexpr int kRetryCap = 10000;
  for (int attempt = 1; attempt <= kRetryCap; ++attempt) {
    std::vector<double> centers(nu);
    for (int l = 0; l < nu; ++l) centers[l] = rng.uniform(w, kPi - w);
    bool disjoint = true;
    for (int i = 0; i < nu && disjoint; ++i)
      for (int j = i + 1; j < nu; ++j)
        if (!(std::abs(centers[i] - centers[j]) > 2.0 * w)) {
          disjoint = false;
          break;
        }
    if (disjoint) {
      if (attempts) *attempts = attempt;
      std::sort(centers.begin(), centers.end());
      prior.centers = std::move(centers);
      return prior;
    }
  }
  throw std::runtime_error("sample_hyperparams: retry cap exceeded, infeasible nu/W combination");
}

double relative_bandwidth_error(double w_hat, double w) {
  if (w == 0.0) throw std::invalid_argument("relative_bandwidth_error: W must be nonzero");
  return (w_hat - w) / w;
}

double relative_center_error(const Eigen::VectorXd& theta_hat, const Eigen::VectorXd& theta) {
  if (theta_hat.size() != theta.size())
    throw std::invalid_argument("relative_center_error: dimension mismatch");
  Eigen::VectorXd a = theta_hat;
  Eigen::VectorXd b = theta;
  std::sort(a.data(), a.data() + a.size());
  std::sort(b.data(), b.data() + b.size());
  return (a - b).norm() / b.norm();
}

BoxStats box_stats(std::vector<double> values) {
  BoxStats stats;
  stats.count = static_cast<int>(values.size());
  if (values.empty()) return stats;
  std::sort(values.begin(), values.end());
  auto quantile = [&](double p) {
    const double h = p * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - std::floor(h)) * (values[hi] - values[lo]);
  };
  stats.median = quantile(0.5);
  stats.q1 = quantile(0.25);
  stats.q3 = quantile(0.75);
  const double iqr = stats.q3 - stats.q1;
  const double lo_fence = stats.q1 - 1.5 * iqr;
  const double hi_fence = stats.q3 + 1.5 * iqr;
  stats.lo_whisker = stats.hi_whisker = stats.median;
  bool first = true;
  for (double v : values) {
    if (v < lo_fence || v > hi_fence) {
      stats.outliers.push_back(v);
      continue;
    }
    if (first) {
      stats.lo_whisker = v;
      first = false;
    }
    stats.hi_whisker = v;
  }
  return stats;
}

namespace {

TrialRecord run_trial(const McConfig& cfg, const SweepPoint& point, int point_index, int trial_id,
                      SplitMix64 rng) {
  TrialRecord rec;
  rec.trial = trial_id;
  rec.point_index = point_index;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    PriorHyperParams prior = sample_hyperparams(rng, cfg.nu);
    prior.amp_variance = cfg.sigma2;
    prior.noise_variance = snr_to_noise_variance(point.snr_db, cfg.sigma2);
    rec.theta_true = Eigen::Map<const Eigen::VectorXd>(prior.centers.data(), cfg.nu);
    rec.w_true = prior.half_bandwidth;

    PanelConfig panel_cfg;
    panel_cfg.prior = prior;
    panel_cfg.samples_per_path = point.n;
    panel_cfg.snapshot_count = point.l;
    panel_cfg.amp_law = cfg.amp_law;
    panel_cfg.seed = rng.next_u64();
    const SnapshotPanel panel = generate_panel(panel_cfg);

    const CenterEstimate centers = estimate_centers(panel, cfg.nu);
    rec.theta_hat = centers.theta_hat;
    rec.w_hat = centers.w_hat;
    rec.rank_hat = centers.rank_hat;
    rec.w_rel_err = relative_bandwidth_error(centers.w_hat, prior.half_bandwidth);
    rec.theta_rel_err = relative_center_error(centers.theta_hat, rec.theta_true);
    for (const auto& flag : centers.flags) rec.flags.push_back(flag);

    if (cfg.run_map) {
      MapProblem problem;
      problem.y = panel.data.transpose();
      problem.theta0 = centers.theta_hat;
      problem.w = centers.w_hat;
      const MapResult map = map_refine(problem);
      rec.omega_map = map.omega_map;
      rec.map_rel_err = relative_center_error(map.omega_map, rec.theta_true);
      if (!map.converged) rec.flags.push_back("map_nonconverged");
      if (map.ridge_bumped) rec.flags.push_back("map_ridge_bumped");
    } else {
      rec.omega_map = Eigen::VectorXd::Constant(cfg.nu, std::nan(""));
      rec.map_rel_err = std::nan("");
    }
  } catch (const std::exception& err) {
    rec.failed = true;
    std::string reason = err.what();
    std::replace(reason.begin(), reason.end(), ',', ';');
    rec.flags.push_back("failed:" + reason);
    if (rec.theta_true.size() == 0) rec.theta_true = Eigen::VectorXd::Constant(cfg.nu, std::nan(""));
    if (rec.theta_hat.size() == 0) rec.theta_hat = Eigen::VectorXd::Constant(cfg.nu, std::nan(""));
    if (rec.omega_map.size() == 0) rec.omega_map = Eigen::VectorXd::Constant(cfg.nu, std::nan(""));
    rec.w_rel_err = rec.theta_rel_err = rec.map_rel_err = std::nan("");
  }
  if (cfg.timing) {
    const auto t1 = std::chrono::steady_clock::now();
    rec.ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  }
  return rec;
}

int effective_threads(const McConfig& cfg) {
  int threads = cfg.threads > 0 ? cfg.threads
                                : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("SPECBAND_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) threads = std::min(threads, cap);
  }
  return threads;
}

void append_vector_csv(std::ostringstream& out, const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) out << "," << format_double(v[i]);
}

}  // namespace

std::string trials_csv_header(int nu) {
  std::ostringstream out;
  out << "trial";
  for (int l = 1; l <= nu; ++l) out << ",theta_true_" << l;
  out << ",w_true,w_hat,w_rel_err";
  for (int l = 1; l <= nu; ++l) out << ",theta_hat_" << l;
  out << ",theta_rel_err";
  for (int l = 1; l <= nu; ++l) out << ",omega_map_" << l;
  out << ",map_rel_err,rank_hat,flags,ms";
  return out.str();
}

std::string trial_record_csv_row(const TrialRecord& rec, int nu) {
  std::ostringstream out;
  out << rec.trial;
  append_vector_csv(out, rec.theta_true);
  out << "," << format_double(rec.w_true) << "," << format_double(rec.w_hat) << ","
      << format_double(rec.w_rel_err);
  append_vector_csv(out, rec.theta_hat);
  out << "," << format_double(rec.theta_rel_err);
  append_vector_csv(out, rec.omega_map);
  out << "," << format_double(rec.map_rel_err) << "," << rec.rank_hat << ",";
  for (std::size_t i = 0; i < rec.flags.size(); ++i) out << (i > 0 ? ";" : "") << rec.flags[i];
  out << "," << format_double(rec.ms);
  (void)nu;
  return out.str();
}

nlohmann::json campaign_summary_json(const McConfig& cfg, const CampaignResult& result) {
  nlohmann::json points = nlohmann::json::array();
  auto stats_json = [](const BoxStats& s) {
    return nlohmann::json{{"median", s.median},       {"q1", s.q1},
                          {"q3", s.q3},               {"lo_whisker", s.lo_whisker},
                          {"hi_whisker", s.hi_whisker}, {"outliers", s.outliers},
                          {"count", s.count}};
  };
  for (std::size_t p = 0; p < result.points.size(); ++p) {
    std::vector<double> w_errs, theta_errs, map_errs;
    int failures = 0;
    for (const auto& rec : result.records) {
      if (rec.point_index != static_cast<int>(p)) continue;
      if (rec.failed) {
        ++failures;
        continue;
      }
      w_errs.push_back(rec.w_rel_err);
      theta_errs.push_back(rec.theta_rel_err);
      if (std::isfinite(rec.map_rel_err)) map_errs.push_back(rec.map_rel_err);
    }
    nlohmann::json jp;
    jp["n"] = result.points[p].n;
    jp["l"] = result.points[p].l;
    jp["snr_db"] = result.points[p].snr_db;
    jp["first_trial"] = static_cast<int>(p) * cfg.trials;
    jp["trials"] = cfg.trials;
    jp["failures"] = failures;
    jp["w_rel_err"] = stats_json(box_stats(std::move(w_errs)));
    jp["theta_rel_err"] = stats_json(box_stats(std::move(theta_errs)));
    if (cfg.run_map) jp["map_rel_err"] = stats_json(box_stats(std::move(map_errs)));
    points.push_back(std::move(jp));
  }
  nlohmann::json j;
  j["config"] = {{"trials", cfg.trials},      {"nu", cfg.nu},
                 {"sigma2", cfg.sigma2},      {"master_seed", cfg.master_seed},
                 {"run_map", cfg.run_map},
                 {"amp_law", cfg.amp_law == AmplitudeLaw::kGaussian ? "gaussian" : "uniform"}};
  j["points"] = points;
  return j;
}

CampaignResult run_campaign(const McConfig& cfg) {
  cfg.validate();
  CampaignResult result;
  result.points = cfg.sweep_points();
  const int total = static_cast<int>(result.points.size()) * cfg.trials;
  result.records.resize(total);

  const SplitMix64 root(cfg.master_seed);
  std::atomic<int> next{0};
  auto worker = [&]() {
    while (true) {
      const int id = next.fetch_add(1);
      if (id >= total) break;
      const int point_index = id / cfg.trials;
      result.records[id] =
          run_trial(cfg, result.points[point_index], point_index, id,
                    root.split_at(static_cast<std::uint64_t>(id)));
    }
  };
  const int threads = std::min(effective_threads(cfg), total);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  if (!cfg.outputs.empty()) {
    std::filesystem::create_directories(cfg.outputs);
    const auto dir = std::filesystem::path(cfg.outputs);
    std::ofstream csv(dir / "trials.csv");
    if (!csv) throw std::runtime_error("cannot open trials.csv under " + cfg.outputs);
    csv << trials_csv_header(cfg.nu) << "\n";
    for (const auto& rec : result.records) csv << trial_record_csv_row(rec, cfg.nu) << "\n";
    if (!csv) throw std::runtime_error("write failed for trials.csv");
    write_json_file((dir / "summary.json").string(), campaign_summary_json(cfg, result));
  }
  return result;
}

McConfig mc_config_from_json(const nlohmann::json& j) {
  McConfig cfg;
  cfg.trials = j.value("trials", cfg.trials);
  auto read_list = [&j](const char* key, auto& out) {
    if (!j.contains(key)) return;
    using Elem = typename std::remove_reference_t<decltype(out)>::value_type;
    if (j.at(key).is_array())
      out = j.at(key).get<std::vector<Elem>>();
    else
      out = {j.at(key).get<Elem>()};
  };
  read_list("n", cfg.n_list);
  read_list("l", cfg.l_list);
  read_list("snr_db", cfg.snr_list);
  cfg.nu = j.value("nu", cfg.nu);
  cfg.sigma2 = j.value("sigma2", cfg.sigma2);
  if (j.contains("amp_law")) {
    const std::string law = j.at("amp_law").get<std::string>();
    if (law == "gaussian")
      cfg.amp_law = AmplitudeLaw::kGaussian;
    else if (law == "uniform")
      cfg.amp_law = AmplitudeLaw::kUniform;
    else
      throw std::invalid_argument("mc config: unknown amp_law '" + law + "'");
  }
  cfg.master_seed = j.value("master_seed", 0ull);
  cfg.outputs = j.value("outputs", std::string{});
  cfg.run_map = j.value("map", cfg.run_map);
  cfg.timing = j.value("timing", cfg.timing);
  cfg.threads = j.value("threads", cfg.threads);
  return cfg;
}

}  // namespace specband
