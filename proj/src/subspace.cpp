// SPDX-License-Identifier: Apache-2.0
//
// specband: empirical-Bayes frequency estimation for noisy multi-sinusoid signals
#include "specband/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>

namespace specband {

namespace {
constexpr double kRealAxisTol = 1e-9;
}

ObservabilitySlice truncate_eigenvectors(const EigenSystem& eigen, int n) {
  const int full = eigen.size();
  if (n < 1 || n >= full) throw std::invalid_argument("truncate_eigenvectors: need 1 <= n < N");
  return ObservabilitySlice{eigen.vectors.leftCols(n)};
}

RotationRealization solve_orthogonal_procrustes(const Eigen::MatrixXd& H, int k) {
  const int rows = static_cast<int>(H.rows());
  const int n = static_cast<int>(H.cols());
  if (k == 0) k = rows - 1;
  if (k < 1 || k > rows - 1) throw std::invalid_argument("procrustes: need 1 <= k <= N-1");
  const Eigen::MatrixXd cross = H.topRows(k).transpose() * H.middleRows(1, k);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  RotationRealization out;
  out.A = svd.matrixU() * svd.matrixV().transpose();
  out.c = H.row(0);
  const double scale = svd.singularValues()[0];
  out.degenerate_svd = !(scale > 0.0) || svd.singularValues()[n - 1] <= 1e-14 * scale;
  return out;
}

RotationRealization solve_orthogonal_procrustes(const ObservabilitySlice& slice, int k) {
  return solve_orthogonal_procrustes(slice.H, k);
}

PhaseAngles phase_angles(const RotationRealization& realization) {
  const Eigen::VectorXcd eigs = realization.A.eigenvalues();
  PhaseAngles out;
  for (int i = 0; i < eigs.size(); ++i) {
    const double phi = std::arg(eigs[i]);
    if (std::abs(phi) <= kRealAxisTol || std::abs(std::abs(phi) - kPi) <= kRealAxisTol) {
      ++out.real_axis_count;
      continue;
    }
    if (phi > 0.0) out.positive.push_back(phi);  // conjugate partner carries -phi
  }
  std::sort(out.positive.begin(), out.positive.end());
  return out;
}

namespace {

std::vector<double> cluster_means(const std::vector<double>& phases, const std::vector<int>& labels,
                                  int nu) {
  std::vector<double> sums(nu, 0.0);
  std::vector<int> counts(nu, 0);
  for (std::size_t i = 0; i < phases.size(); ++i) {
    sums[labels[i]] += phases[i];
    ++counts[labels[i]];
  }
  for (int c = 0; c < nu; ++c) sums[c] = counts[c] > 0 ? sums[c] / counts[c] : 0.0;
  return sums;
}

std::vector<int> gap_split_labels(const std::vector<double>& sorted, int nu) {
  const int n = static_cast<int>(sorted.size());
  // nu-1 largest adjacent gaps become the cluster boundaries.
  std::vector<int> gap_order(n - 1);
  std::iota(gap_order.begin(), gap_order.end(), 0);
  std::stable_sort(gap_order.begin(), gap_order.end(), [&](int a, int b) {
    return sorted[a + 1] - sorted[a] > sorted[b + 1] - sorted[b];
  });
  std::vector<int> cuts(gap_order.begin(), gap_order.begin() + (nu - 1));
  std::sort(cuts.begin(), cuts.end());
  std::vector<int> labels(n);
  int cluster = 0;
  std::size_t next_cut = 0;
  for (int i = 0; i < n; ++i) {
    labels[i] = cluster;
    if (next_cut < cuts.size() && i == cuts[next_cut]) {
      ++cluster;
      ++next_cut;
    }
  }
  return labels;
}

std::vector<int> lloyd_labels(const std::vector<double>& sorted, int nu, std::vector<int> labels) {
  for (int iter = 0; iter < 1000; ++iter) {
    const std::vector<double> means = cluster_means(sorted, labels, nu);
    bool changed = false;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      int best = labels[i];
      double best_dist = std::abs(sorted[i] - means[best]);
      for (int c = 0; c < nu; ++c) {
        const double d = std::abs(sorted[i] - means[c]);
        if (d < best_dist) {
          best_dist = d;
          best = c;
        }
      }
      if (best != labels[i]) {
        labels[i] = best;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return labels;
}

}  // namespace

PhaseClusters cluster_phases(const std::vector<double>& phases, int nu, ClusterMethod method) {
  if (nu < 1) throw std::invalid_argument("cluster_phases: need nu >= 1");
  if (static_cast<int>(phases.size()) < nu)
    throw std::runtime_error("cluster_phases: insufficient spectral content");
  PhaseClusters out;
  out.phases = phases;
  std::sort(out.phases.begin(), out.phases.end());
  out.assignment = gap_split_labels(out.phases, nu);
  if (method == ClusterMethod::kLloyd) {
    std::vector<int> refined = lloyd_labels(out.phases, nu, out.assignment);
    // Keep the gap split if Lloyd emptied a cluster.
    std::vector<int> counts(nu, 0);
    for (int label : refined) ++counts[label];
    if (std::all_of(counts.begin(), counts.end(), [](int c) { return c > 0; }))
      out.assignment = std::move(refined);
  }
  out.centers = cluster_means(out.phases, out.assignment, nu);
  out.counts.assign(nu, 0);
  for (int label : out.assignment) ++out.counts[label];
  return out;
}

std::vector<std::pair<double, double>> discrete_spectrum(const RotationRealization& realization) {
  const Eigen::ComplexEigenSolver<Eigen::MatrixXd> solver(realization.A);
  if (solver.info() != Eigen::Success) throw std::runtime_error("discrete_spectrum: eigensolver failed");
  const Eigen::RowVectorXcd ct = realization.c.cast<std::complex<double>>() * solver.eigenvectors();
  std::vector<std::pair<double, double>> spectrum(ct.size());
  for (int i = 0; i < ct.size(); ++i)
    spectrum[i] = {std::arg(solver.eigenvalues()[i]), std::norm(ct[i])};
  std::sort(spectrum.begin(), spectrum.end());
  return spectrum;
}

CenterEstimate estimate_centers(const CovEstimate& est, int nu, const SubspaceOptions& opts) {
  const int n = est.sigma_hat.size();
  CenterEstimate out;
  out.rank_hat = opts.rank_override > 0 ? opts.rank_override : est.rank_hat;
  out.w_hat = opts.rank_override > 0 ? bandwidth_from_rank(out.rank_hat, nu, n) : est.w_hat;

  const ObservabilitySlice slice = truncate_eigenvectors(est.eigen, out.rank_hat);
  const RotationRealization realization = solve_orthogonal_procrustes(slice, opts.shift_depth);
  if (realization.degenerate_svd) out.flags.push_back("degenerate_procrustes_svd");

  const PhaseAngles angles = phase_angles(realization);
  if (angles.real_axis_count > 0) out.flags.push_back("real_axis_eigenvalues_excluded");
  const PhaseClusters clusters = cluster_phases(angles.positive, nu, opts.cluster_method);

  out.phases = clusters.phases;
  out.cluster_labels = clusters.assignment;
  out.theta_hat = Eigen::Map<const Eigen::VectorXd>(clusters.centers.data(), nu);

  // Positive-phase mass from the discrete spectrum, matched by phase order.
  const auto spectrum = discrete_spectrum(realization);
  out.weights.reserve(out.phases.size());
  for (double phi : out.phases) {
    double mass = 0.0;
    double best = 1e300;
    for (const auto& [angle, weight] : spectrum) {
      const double d = std::abs(angle - phi);
      if (d < best) {
        best = d;
        mass = weight;
      }
    }
    out.weights.push_back(mass);
  }

  // A phase much farther from its cluster mean than the estimated bandwidth
  // usually comes from rank overestimation; flag, keep.
  for (std::size_t i = 0; i < out.phases.size(); ++i) {
    if (std::abs(out.phases[i] - clusters.centers[out.cluster_labels[i]]) > 2.0 * out.w_hat) {
      out.flags.push_back("outlying_phase_absorbed");
      break;
    }
  }
  return out;
}

CenterEstimate estimate_centers(const SnapshotPanel& panel, int nu, const SubspaceOptions& opts) {
  return estimate_centers(estimate_covariance(panel, nu, opts.covest), nu, opts);
}

}  // namespace specband
