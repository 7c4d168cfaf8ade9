// SPDX-License-Identifier: Apache-2.0
//
// specband: empirical-Bayes frequency estimation for noisy multi-sinusoid signals
#ifndef SPECBAND_HARNESS_HPP
#define SPECBAND_HARNESS_HPP

#include <cstdint>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "specband/map.hpp"
#include "specband/subspace.hpp"

namespace specband {

/// Amplitude variance matching the U[-1.3813, 1.3813] law.
constexpr double kDefaultMcSigma2 = 1.3813 * 1.3813 / 3.0;

/// One sweep point of a Monte-Carlo campaign.
struct SweepPoint {
  int n = 0;
  int l = 0;
  double snr_db = 0.0;
};

/// Campaign design.  n/l/snr lists are zipped into sweep points (length-1
/// lists broadcast), so e.g. n = l = {50,100,200} sweeps the sizes jointly.
struct McConfig {
  int trials = 100;
  std::vector<int> n_list{100};
  std::vector<int> l_list{100};
  std::vector<double> snr_list{15.0};
  int nu = 2;
  double sigma2 = kDefaultMcSigma2;
  AmplitudeLaw amp_law = AmplitudeLaw::kUniform;
  std::uint64_t master_seed = 0;
  std::string outputs;   // directory for trials.csv + summary.json; empty keeps results in memory
  bool run_map = true;
  /// Wall-time recording is off by default so trials.csv is a pure function
  /// of the config (the ms column reads 0); enable for profiling runs.
  bool timing = false;
  int threads = 0;  // 0: hardware concurrency; SPECBAND_THREADS caps either way

  void validate() const;
  std::vector<SweepPoint> sweep_points() const;
};

struct TrialRecord {
  int trial = 0;        // global id: point_index * trials + trial_in_point
  int point_index = 0;
  Eigen::VectorXd theta_true;  // sorted
  double w_true = 0.0;
  double w_hat = 0.0;
  double w_rel_err = 0.0;
  Eigen::VectorXd theta_hat;
  double theta_rel_err = 0.0;
  Eigen::VectorXd omega_map;
  double map_rel_err = 0.0;
  int rank_hat = 0;
  std::vector<std::string> flags;
  double ms = 0.0;
  bool failed = false;
};

/// Median/quartiles/1.5 IQR whiskers and outliers of a sample.
struct BoxStats {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double lo_whisker = 0.0;
  double hi_whisker = 0.0;
  std::vector<double> outliers;
  int count = 0;
};

BoxStats box_stats(std::vector<double> values);

struct CampaignResult {
  std::vector<TrialRecord> records;
  std::vector<SweepPoint> points;
};

/// Random hyperparameters of the simulation protocol: W uniform on
/// 2pi [0.01, 0.05], centers uniform on [W, pi - W] redrawn until the
/// supports are disjoint (|theta_i - theta_j| > 2W), at most 10^4 attempts.
/// Centers come back sorted; amp/noise variances are left at defaults.
PriorHyperParams sample_hyperparams(SplitMix64& rng, int nu, int* attempts = nullptr);

/// Signed ratio (W_hat - W) / W; the sign distinguishes over/under-estimation.
double relative_bandwidth_error(double w_hat, double w);

/// ||theta_hat - theta|| / ||theta||, components matched by sorted order.
double relative_center_error(const Eigen::VectorXd& theta_hat, const Eigen::VectorXd& theta);

/// Run a full campaign: trials are deterministic functions of
/// (master_seed, global trial id), run in parallel, and single-trial
/// failures are flagged without aborting.  Writes outputs/trials.csv and
/// outputs/summary.json when an output directory is configured.
CampaignResult run_campaign(const McConfig& cfg);

std::string trials_csv_header(int nu);
std::string trial_record_csv_row(const TrialRecord& rec, int nu);
nlohmann::json campaign_summary_json(const McConfig& cfg, const CampaignResult& result);

McConfig mc_config_from_json(const nlohmann::json& j);

}  // namespace specband

#endif  // SPECBAND_HARNESS_HPP
