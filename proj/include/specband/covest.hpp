// SPDX-License-Identifier: Apache-2.0
//
// specband: empirical-Bayes frequency estimation for noisy multi-sinusoid signals
#ifndef SPECBAND_COVEST_HPP
#define SPECBAND_COVEST_HPP

#include "specband/signal.hpp"

namespace specband {

/// Everything extracted from a panel's sample covariance in one pass.
struct CovEstimate {
  ToeplitzCovariance sigma_hat;  // Toeplitz-averaged estimate of Sigma_N
  EigenSystem eigen;             // its full spectrum
  double noise_floor = 0.0;      // smallest eigenvalue, floored at 0
  double signal_variance = 0.0;  // sigma_y(0) - noise_floor, clamped at 0
  int rank_hat = 0;              // squared-ratio knee index
  double w_hat = 0.0;            // (pi/2) rank_hat / (nu N), clamped to (0, pi/2]
  bool variance_clamped = false;
};

struct CovEstOptions {
  /// Upper end of the knee search; 0 means the N/2 default.  The tail
  /// eigenvalues of an estimated covariance hover near the noise floor and
  /// produce spurious ratio maxima, hence the cap.
  int search_max = 0;
  /// Search k in 1..N-1 instead (the uncapped variant).
  bool full_search = false;
};

/// Remove each snapshot's own time mean.  Truth records pass through.
SnapshotPanel center_panel(const SnapshotPanel& panel);

/// Per-path lag covariances sigma_k(tau) = 1/(N-tau) sum_t y(t+tau) y(t),
/// averaged across snapshots; symmetric Toeplitz by construction.
/// Expects a centered panel.
ToeplitzCovariance toeplitz_cov_estimate(const SnapshotPanel& panel);

/// Cross-sectional outer-product estimate (1/L) sum_k Y_k Y_k^T; PSD by
/// construction, kept for comparison with the Toeplitz variant.
Eigen::MatrixXd outer_product_cov_estimate(const SnapshotPanel& panel);

/// Noise floor: the smallest eigenvalue of Sigma_hat, floored at 0.
double noise_floor(const EigenSystem& eigen);

/// Knee of the eigenvalue plot: argmax_k lambda_k^2 / lambda_{k+1}^2 over
/// k in [1, search_max], ties to the smallest index.  Indices whose
/// denominator eigenvalue is nonpositive are not knee candidates.  Throws
/// "no spectral knee" when every inspected ratio is 1 or no candidate exists.
int rank_by_ratio(const EigenSystem& eigen, int search_max);

/// W_hat = (pi/2) rank_hat / (nu N), clamped to (0, pi/2].
double bandwidth_from_rank(int rank_hat, int nu, int n);

struct ArccosEstimate {
  double theta_hat = 0.0;
  bool clamped = false;  // arccos argument fell outside [-1, 1] and was clamped
};

/// Coarse single-frequency center estimate
///   theta_hat = arccos( sigma_x(1)/sigma_x^2 * W_hat/sin(W_hat) ).
/// Requires nu = 1 context and est.signal_variance > 0.
ArccosEstimate arccos_center_estimate(const CovEstimate& est);

/// Full chain: center -> Toeplitz estimate -> eigendecomposition ->
/// noise floor, signal variance, rank and bandwidth.
CovEstimate estimate_covariance(const SnapshotPanel& panel, int nu,
                                const CovEstOptions& opts = {});

}  // namespace specband

#endif  // SPECBAND_COVEST_HPP
