// SPDX-License-Identifier: Apache-2.0
//
// specband: empirical-Bayes frequency estimation for noisy multi-sinusoid signals
#ifndef SPECBAND_SUBSPACE_HPP
#define SPECBAND_SUBSPACE_HPP

#include <string>
#include <utility>
#include <vector>

#include "specband/covest.hpp"

namespace specband {

/// Top-n eigenvectors of the estimated covariance, stacked as N x n columns.
struct ObservabilitySlice {
  Eigen::MatrixXd H;

  int rows() const { return static_cast<int>(H.rows()); }
  int rank() const { return static_cast<int>(H.cols()); }
};

/// Orthogonal state matrix A and output row c of the autonomous realization
/// x(t) = c xi(t), xi(t+1) = A xi(t).  The state covariance is taken as a
/// scalar multiple of the identity throughout.
struct RotationRealization {
  Eigen::MatrixXd A;
  Eigen::RowVectorXd c;
  bool degenerate_svd = false;  // zero singular values met in the Procrustes solve
};

/// Positive eigen-phases of A grouped into nu clusters.
struct PhaseClusters {
  std::vector<double> phases;    // sorted ascending, in (0, pi)
  std::vector<int> assignment;   // cluster label per phase, contiguous over sorted order
  std::vector<double> centers;   // nu arithmetic means, strictly increasing
  std::vector<int> counts;       // per-cluster sizes, summing to phases.size()
};

struct PhaseAngles {
  std::vector<double> positive;   // strictly inside (0, pi), sorted
  int real_axis_count = 0;        // eigenvalues at phase 0 or pi, excluded
};

enum class ClusterMethod {
  kGapSplit,  // deterministic largest-gap split on sorted phases, then means
  kLloyd      // standard Lloyd iterations, deterministically seeded from the gap split
};

struct SubspaceOptions {
  int rank_override = 0;   // 0: use rank_by_ratio from the covariance estimate
  int shift_depth = 0;     // Procrustes k; 0 means N-1
  ClusterMethod cluster_method = ClusterMethod::kGapSplit;
  CovEstOptions covest;
};

/// Everything the center-frequency pipeline produces.
struct CenterEstimate {
  Eigen::VectorXd theta_hat;  // sorted ascending
  double w_hat = 0.0;
  int rank_hat = 0;
  std::vector<double> phases;
  std::vector<double> weights;  // discrete-spectrum mass at each positive phase
  std::vector<int> cluster_labels;
  std::vector<std::string> flags;
};

/// Columns are the eigenvectors of the n largest eigenvalues; orthonormal.
ObservabilitySlice truncate_eigenvectors(const EigenSystem& eigen, int n);

/// Shift-invariance solve: with H_k the first k rows of H and down(H_k) rows
/// 2..k+1, A = U V^T from the SVD of H_k^T down(H_k) minimizes
/// ||down(H_k) - H_k A||_F over orthogonal A; c is the first row of H.
/// k = 0 selects the default depth N-1.
RotationRealization solve_orthogonal_procrustes(const Eigen::MatrixXd& H, int k = 0);
RotationRealization solve_orthogonal_procrustes(const ObservabilitySlice& slice, int k = 0);

/// Eigenvalue arguments of A with conjugate pairs folded to the strictly
/// positive representative; phases within 1e-9 of 0 or pi are counted
/// separately and excluded (real eigenvalues have no conjugate partner).
PhaseAngles phase_angles(const RotationRealization& realization);

/// nu clusters over sorted phases, centers = arithmetic means.
/// Deterministic given inputs; throws "insufficient spectral content" when
/// there are fewer phases than clusters.
PhaseClusters cluster_phases(const std::vector<double>& phases, int nu,
                             ClusterMethod method = ClusterMethod::kGapSplit);

/// Discrete output spectrum: (phase_j, |(c T)_j|^2) over all eigenvalues of
/// A = T Lambda T^*, with the state covariance normalized to the identity.
/// The weights sum to c c^T.
std::vector<std::pair<double, double>> discrete_spectrum(const RotationRealization& realization);

/// Steps 1-6 chained: covariance estimate -> truncation -> Procrustes ->
/// phases -> clustering; theta_hat comes back sorted.
CenterEstimate estimate_centers(const CovEstimate& est, int nu, const SubspaceOptions& opts = {});
CenterEstimate estimate_centers(const SnapshotPanel& panel, int nu, const SubspaceOptions& opts = {});

}  // namespace specband

#endif  // SPECBAND_SUBSPACE_HPP
