// SPDX-License-Identifier: Apache-2.0
//
// specband: empirical-Bayes frequency estimation for noisy multi-sinusoid signals
#ifndef SPECBAND_SIGNAL_HPP
#define SPECBAND_SIGNAL_HPP

#include <cstdint>

#include "specband/kernel.hpp"
#include "specband/rng.hpp"

namespace specband {

/// Zero-mean amplitude law with variance sigma^2.  The uniform option is
/// U[-sqrt(3) sigma, sqrt(3) sigma].
enum class AmplitudeLaw { kGaussian, kUniform };

struct PanelConfig {
  PriorHyperParams prior;
  int samples_per_path = 0;  // N
  int snapshot_count = 0;    // L
  AmplitudeLaw amp_law = AmplitudeLaw::kGaussian;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Per-snapshot draws kept for evaluation against the truth.
struct SnapshotTruth {
  Eigen::MatrixXd omega;  // L x nu
  Eigen::MatrixXd a;      // L x nu
  Eigen::MatrixXd b;      // L x nu
};

/// L independent length-N sample paths of the observed process (rows are
/// snapshots, time index t = 1..N maps to columns 0..N-1).
struct SnapshotPanel {
  Eigen::MatrixXd data;  // L x N
  SnapshotTruth truth;   // empty matrices when the panel was read from disk

  int snapshots() const { return static_cast<int>(data.rows()); }
  int samples() const { return static_cast<int>(data.cols()); }
};

/// One draw of the hidden frequencies, omega_l ~ U[theta_l - W, theta_l + W].
Eigen::VectorXd draw_frequencies(const PriorHyperParams& prior, SplitMix64& rng);

/// y_k(t) = sum_l a_{k,l} cos(omega_{k,l} t) + b_{k,l} sin(omega_{k,l} t) + w_k(t),
/// t = 1..N, all draws i.i.d. across snapshots, reproducible from cfg.seed.
SnapshotPanel generate_panel(const PanelConfig& cfg);

/// sigma_w^2 from SNR defined as 20 log10(sigma / sigma_w).
double snr_to_noise_variance(double snr_db, double sigma2);

}  // namespace specband

#endif  // SPECBAND_SIGNAL_HPP
