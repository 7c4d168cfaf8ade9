// SPDX-License-Identifier: Apache-2.0
//
// specband: empirical-Bayes frequency estimation for noisy multi-sinusoid signals
#ifndef SPECBAND_MAP_HPP
#define SPECBAND_MAP_HPP

#include <vector>

#include "specband/kernel.hpp"

namespace specband {

/// Sinusoid design matrix V = [C(omega) S(omega)] sampled at t = 1..N.
struct DesignMatrix {
  Eigen::MatrixXd V;            // N x 2nu: cosine block, then sine block
  bool near_degenerate = false; // frequencies nearly coincident or at 0/pi

  int nu() const { return static_cast<int>(V.cols()) / 2; }
};

/// MAP refinement input.  y holds one observation column per snapshot; the
/// multi-snapshot objective is the summed squared residual (Frobenius norm).
/// The ridge schedule is lambda(k) = ridge0 / (k+1), nonincreasing to 0.
struct MapProblem {
  Eigen::MatrixXd y;        // N x L
  Eigen::VectorXd theta0;   // subspace center estimate, the starting point
  double w = 0.0;           // box half-width W_hat
  double ridge0 = 0.0;      // lambda(0); 0 disables the ridge
  double tol = 1e-8;        // stop when ||omega(k+1) - omega(k)||_inf < tol
  int max_iters = 100;
  bool refresh_amplitudes = true;  // re-estimate u each iterate; false freezes u(theta0)
  bool enforce_descent = true;     // backtrack when a step raises the residual

  void validate() const;
};

struct MapResult {
  Eigen::VectorXd omega_map;
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;  // squared residual norm per accepted iterate
  bool ridge_bumped = false;            // singular normal matrix forced a ridge
};

/// V[t-1, l] = cos(omega_l t), V[t-1, nu+l] = sin(omega_l t).
/// Throws on duplicate frequencies (rank deficiency).
DesignMatrix build_design(const Eigen::VectorXd& omega, int n);

/// Least-squares amplitudes [V^T V]^{-1} V^T y, one column per snapshot.
/// Throws when the normal equations are singular, reporting the condition
/// number.
Eigen::MatrixXd amplitude_ls(const DesignMatrix& design, const Eigen::MatrixXd& y);

/// Gradient of V(omega) u in omega: column l is D_N (-s_l a_l + c_l b_l)
/// with D_N = diag{1..N}.
Eigen::MatrixXd gradient_matrix(const Eigen::VectorXd& theta, const Eigen::VectorXd& u_hat, int n);

/// Minimizer of ||target - M x||^2 + lambda ||x||^2 over the box
/// |x_l| <= w.  Exact in one pass for nu = 1; coordinate descent to a
/// 1e-12 KKT residual otherwise.
Eigen::VectorXd box_projected_ls(const Eigen::MatrixXd& m, const Eigen::VectorXd& target, double w,
                                 double lambda);

/// Iterated box-constrained linearized least squares around theta0.
/// Every iterate keeps |omega_l - theta0_l| <= w; non-convergence returns the
/// best iterate with converged = false.
MapResult map_refine(const MapProblem& problem);

}  // namespace specband

#endif  // SPECBAND_MAP_HPP
