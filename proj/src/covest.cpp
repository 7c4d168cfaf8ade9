// SPDX-License-Identifier: Apache-2.0
//
// specband: empirical-Bayes frequency estimation for noisy multi-sinusoid signals
#include "specband/covest.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace specband {

SnapshotPanel center_panel(const SnapshotPanel& panel) {
  SnapshotPanel centered = panel;
  centered.data.colwise() -= panel.data.rowwise().mean();
  return centered;
}

ToeplitzCovariance toeplitz_cov_estimate(const SnapshotPanel& panel) {
  const int n = panel.samples();
  const int num_snapshots = panel.snapshots();
  if (n < 2 || num_snapshots < 1) throw std::invalid_argument("toeplitz_cov_estimate: empty panel");
  ToeplitzCovariance cov;
  cov.first_column = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < num_snapshots; ++k) {
    const auto row = panel.data.row(k);
    for (int tau = 0; tau < n; ++tau) {
      // 1/(N - tau) divisor, exactly as the displayed per-path estimator.
      const int terms = n - tau;
      cov.first_column[tau] += row.tail(terms).dot(row.head(terms)) / static_cast<double>(terms);
    }
  }
  cov.first_column /= static_cast<double>(num_snapshots);
  return cov;
}

Eigen::MatrixXd outer_product_cov_estimate(const SnapshotPanel& panel) {
  const int n = panel.samples();
  const int num_snapshots = panel.snapshots();
  if (n < 1 || num_snapshots < 1) throw std::invalid_argument("outer_product_cov_estimate: empty panel");
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < num_snapshots; ++k)
    sigma.selfadjointView<Eigen::Lower>().rankUpdate(panel.data.row(k).transpose(),
                                                     1.0 / static_cast<double>(num_snapshots));
  return sigma.selfadjointView<Eigen::Lower>();
}

double noise_floor(const EigenSystem& eigen) {
  if (eigen.size() == 0) throw std::invalid_argument("noise_floor: empty eigensystem");
  return std::max(eigen.values[eigen.size() - 1], 0.0);
}

int rank_by_ratio(const EigenSystem& eigen, int search_max) {
  const int n = eigen.size();
  if (search_max < 1 || search_max > n - 1)
    throw std::invalid_argument("rank_by_ratio: search_max out of [1, N-1]");
  // Noiseless spectra collapse to machine noise; denominators below a
  // relative floor are clamped there so the knee stays detectable without
  // chasing roundoff garbage.
  const double floor = 1e-14 * std::max(eigen.values[0], 0.0);
  int best_k = 0;
  double best_ratio = 0.0;
  for (int k = 1; k <= search_max; ++k) {
    const double num = eigen.values[k - 1];
    const double den = std::max(eigen.values[k], floor);
    if (!(den > 0.0)) continue;
    const double ratio = (num * num) / (den * den);
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best_k = k;
    }
  }
  if (best_k == 0 || best_ratio <= 1.0 + 1e-12)
    throw std::runtime_error("rank_by_ratio: no spectral knee");
  return best_k;
}

double bandwidth_from_rank(int rank_hat, int nu, int n) {
  if (rank_hat < 1) throw std::invalid_argument("bandwidth_from_rank: rank must be >= 1");
  if (nu < 1 || n < 1) throw std::invalid_argument("bandwidth_from_rank: invalid nu or N");
  const double w = (kPi / 2.0) * static_cast<double>(rank_hat) /
                   (static_cast<double>(nu) * static_cast<double>(n));
  return std::min(w, kPi / 2.0);
}

ArccosEstimate arccos_center_estimate(const CovEstimate& est) {
  if (!(est.signal_variance > 0.0))
    throw std::runtime_error("arccos_center_estimate: nonpositive signal variance, estimate undefined");
  if (est.sigma_hat.size() < 2)
    throw std::invalid_argument("arccos_center_estimate: need at least lag 1");
  // Noise is white, so the observed lag-1 covariance is the signal's.
  const double sigma_x1 = est.sigma_hat.first_column[1];
  double arg = sigma_x1 / est.signal_variance * est.w_hat / std::sin(est.w_hat);
  ArccosEstimate out;
  if (arg > 1.0 || arg < -1.0) {
    arg = std::clamp(arg, -1.0, 1.0);
    out.clamped = true;
  }
  out.theta_hat = std::acos(arg);
  return out;
}

CovEstimate estimate_covariance(const SnapshotPanel& panel, int nu, const CovEstOptions& opts) {
  if (nu < 1) throw std::invalid_argument("estimate_covariance: need nu >= 1");
  const int n = panel.samples();
  CovEstimate est;
  est.sigma_hat = toeplitz_cov_estimate(center_panel(panel));
  est.eigen = eigen_decompose(est.sigma_hat);
  est.noise_floor = noise_floor(est.eigen);
  est.signal_variance = est.sigma_hat.first_column[0] - est.noise_floor;
  if (est.signal_variance < 0.0) {
    est.signal_variance = 0.0;
    est.variance_clamped = true;
  }
  int search_max = opts.search_max;
  if (search_max == 0) search_max = opts.full_search ? n - 1 : std::max(n / 2, 1);
  est.rank_hat = rank_by_ratio(est.eigen, std::min(search_max, n - 1));
  est.w_hat = bandwidth_from_rank(est.rank_hat, nu, n);
  return est;
}

}  // namespace specband
