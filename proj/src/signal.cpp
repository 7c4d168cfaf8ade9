// SPDX-License-Identifier: Apache-2.0
//
// specband: empirical-Bayes frequency estimation for noisy multi-sinusoid signals
#include "specband/signal.hpp"

#include <cmath>
#include <stdexcept>

namespace specband {

void PanelConfig::validate() const {
  // W = 0 (a point prior, fixed frequencies) is allowed for generation even
  // though the strict prior invariant wants W > 0.
  if (prior.half_bandwidth == 0.0) {
    PriorHyperParams widened = prior;
    widened.half_bandwidth = 1e-12;
    widened.validate();
  } else {
    prior.validate();
  }
  if (samples_per_path < 2) throw std::invalid_argument("panel: need N >= 2");
  if (snapshot_count < 1) throw std::invalid_argument("panel: need L >= 1");
}

Eigen::VectorXd draw_frequencies(const PriorHyperParams& prior, SplitMix64& rng) {
  const int nu = prior.nu();
  Eigen::VectorXd omega(nu);
  for (int l = 0; l < nu; ++l)
    omega[l] = rng.uniform(prior.centers[l] - prior.half_bandwidth,
                           prior.centers[l] + prior.half_bandwidth);
  return omega;
}

namespace {

double draw_amplitude(AmplitudeLaw law, double sigma2, SplitMix64& rng) {
  switch (law) {
    case AmplitudeLaw::kGaussian:
      return std::sqrt(sigma2) * rng.gaussian();
    case AmplitudeLaw::kUniform: {
      const double bound = std::sqrt(3.0 * sigma2);
      return rng.uniform(-bound, bound);
    }
  }
  throw std::logic_error("unknown amplitude law");
}

}  // namespace

SnapshotPanel generate_panel(const PanelConfig& cfg) {
  cfg.validate();
  const int n = cfg.samples_per_path;
  const int num_snapshots = cfg.snapshot_count;
  const int nu = cfg.prior.nu();
  const double noise_sd = std::sqrt(cfg.prior.noise_variance);

  SnapshotPanel panel;
  panel.data.resize(num_snapshots, n);
  panel.truth.omega.resize(num_snapshots, nu);
  panel.truth.a.resize(num_snapshots, nu);
  panel.truth.b.resize(num_snapshots, nu);

  SplitMix64 root(cfg.seed);
  for (int k = 0; k < num_snapshots; ++k) {
    // One substream per snapshot so panels are reproducible regardless of
    // how generation is scheduled.
    SplitMix64 rng = root.split_at(static_cast<std::uint64_t>(k));
    const Eigen::VectorXd omega = draw_frequencies(cfg.prior, rng);
    panel.truth.omega.row(k) = omega.transpose();
    for (int l = 0; l < nu; ++l) {
      panel.truth.a(k, l) = draw_amplitude(cfg.amp_law, cfg.prior.amp_variance, rng);
      panel.truth.b(k, l) = draw_amplitude(cfg.amp_law, cfg.prior.amp_variance, rng);
    }
    for (int t = 1; t <= n; ++t) {
      double y = 0.0;
      for (int l = 0; l < nu; ++l)
        y += panel.truth.a(k, l) * std::cos(omega[l] * t) + panel.truth.b(k, l) * std::sin(omega[l] * t);
      if (noise_sd > 0.0) y += noise_sd * rng.gaussian();
      panel.data(k, t - 1) = y;
    }
  }
  return panel;
}

double snr_to_noise_variance(double snr_db, double sigma2) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("snr_to_noise_variance: sigma2 must be positive");
  return sigma2 * std::pow(10.0, -snr_db / 10.0);
}

}  // namespace specband
