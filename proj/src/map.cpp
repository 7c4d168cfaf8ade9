// SPDX-License-Identifier: Apache-2.0
//
// specband: empirical-Bayes frequency estimation for noisy multi-sinusoid signals
#include "specband/map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace specband {

namespace {
constexpr double kDegenerateTol = 1e-6;
constexpr double kSingularRatio = 1e-12;
}  // namespace

void MapProblem::validate() const {
  if (y.rows() < 2 || y.cols() < 1) throw std::invalid_argument("map: empty observation matrix");
  if (theta0.size() < 1) throw std::invalid_argument("map: empty starting point");
  if (!(w > 0.0)) throw std::invalid_argument("map: box half-width must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("map: tolerance must be positive");
  if (ridge0 < 0.0) throw std::invalid_argument("map: ridge weight must be nonnegative");
  if (max_iters < 1) throw std::invalid_argument("map: need at least one iteration");
}

DesignMatrix build_design(const Eigen::VectorXd& omega, int n) {
  const int nu = static_cast<int>(omega.size());
  if (n < 1 || nu < 1) throw std::invalid_argument("build_design: invalid sizes");
  DesignMatrix design;
  design.V.resize(n, 2 * nu);
  for (int l = 0; l < nu; ++l) {
    for (int t = 1; t <= n; ++t) {
      design.V(t - 1, l) = std::cos(omega[l] * t);
      design.V(t - 1, nu + l) = std::sin(omega[l] * t);
    }
    if (std::abs(omega[l]) < kDegenerateTol || std::abs(std::abs(omega[l]) - kPi) < kDegenerateTol)
      design.near_degenerate = true;
  }
  for (int i = 0; i < nu; ++i)
    for (int j = i + 1; j < nu; ++j) {
      const double gap = std::abs(omega[i] - omega[j]);
      if (gap == 0.0) throw std::invalid_argument("build_design: duplicate frequencies, rank deficient");
      if (gap < kDegenerateTol) design.near_degenerate = true;
    }
  return design;
}

Eigen::MatrixXd amplitude_ls(const DesignMatrix& design, const Eigen::MatrixXd& y) {
  if (y.rows() != design.V.rows()) throw std::invalid_argument("amplitude_ls: dimension mismatch");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design.V, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smax = sv[0];
  const double smin = sv[sv.size() - 1];
  if (!(smin > kSingularRatio * smax)) {
    std::ostringstream msg;
    msg << "amplitude_ls: singular normal equations, cond(V) = "
        << (smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity());
    throw std::runtime_error(msg.str());
  }
  return svd.solve(y);
}

Eigen::MatrixXd gradient_matrix(const Eigen::VectorXd& theta, const Eigen::VectorXd& u_hat, int n) {
  const int nu = static_cast<int>(theta.size());
  if (u_hat.size() != 2 * nu) throw std::invalid_argument("gradient_matrix: amplitude vector must have 2 nu entries");
  Eigen::MatrixXd m(n, nu);
  for (int l = 0; l < nu; ++l) {
    const double a = u_hat[l];
    const double b = u_hat[nu + l];
    for (int t = 1; t <= n; ++t)
      m(t - 1, l) = static_cast<double>(t) * (-std::sin(theta[l] * t) * a + std::cos(theta[l] * t) * b);
  }
  return m;
}

Eigen::VectorXd box_projected_ls(const Eigen::MatrixXd& m, const Eigen::VectorXd& target, double w,
                                 double lambda) {
  const int nu = static_cast<int>(m.cols());
  if (target.size() != m.rows()) throw std::invalid_argument("box_projected_ls: dimension mismatch");
  if (!(w >= 0.0) || lambda < 0.0) throw std::invalid_argument("box_projected_ls: invalid w or lambda");
  const Eigen::MatrixXd gram = m.transpose() * m + lambda * Eigen::MatrixXd::Identity(nu, nu);
  const Eigen::VectorXd q = m.transpose() * target;

  auto clamp_box = [w](double v) { return std::clamp(v, -w, w); };

  if (nu == 1) {
    Eigen::VectorXd x(1);
    x[0] = gram(0, 0) > 0.0 ? clamp_box(q[0] / gram(0, 0)) : 0.0;
    return x;
  }

  // Cyclic coordinate descent; each coordinate solve is exact, so the box
  // constraint is maintained throughout.
  Eigen::VectorXd x = Eigen::VectorXd::Zero(nu);
  const double kkt_tol = 1e-12 * std::max(1.0, q.cwiseAbs().maxCoeff());
  for (int sweep = 0; sweep < 10000; ++sweep) {
    for (int l = 0; l < nu; ++l) {
      const double partial = q[l] - gram.row(l).dot(x) + gram(l, l) * x[l];
      x[l] = gram(l, l) > 0.0 ? clamp_box(partial / gram(l, l)) : 0.0;
    }
    const Eigen::VectorXd grad = gram * x - q;
    double kkt = 0.0;
    for (int l = 0; l < nu; ++l) kkt = std::max(kkt, std::abs(x[l] - clamp_box(x[l] - grad[l])));
    if (kkt <= kkt_tol) break;
  }
  return x;
}

namespace {

struct Linearization {
  Eigen::MatrixXd m;       // stacked gradient matrices, (N L) x nu
  Eigen::VectorXd target;  // stacked residuals shifted to the theta0 frame
  double objective = 0.0;  // squared residual norm at the expansion point
};

Linearization linearize(const Eigen::MatrixXd& y, const Eigen::VectorXd& omega,
                        const Eigen::VectorXd& theta0, const Eigen::MatrixXd& amplitudes) {
  const int n = static_cast<int>(y.rows());
  const int snapshots = static_cast<int>(y.cols());
  const int nu = static_cast<int>(omega.size());
  const DesignMatrix design = build_design(omega, n);
  const Eigen::MatrixXd residual = y - design.V * amplitudes;
  Linearization lin;
  lin.objective = residual.squaredNorm();
  lin.m.resize(static_cast<Eigen::Index>(n) * snapshots, nu);
  lin.target.resize(static_cast<Eigen::Index>(n) * snapshots);
  const Eigen::VectorXd deviation = omega - theta0;
  for (int j = 0; j < snapshots; ++j) {
    const Eigen::MatrixXd mj = gradient_matrix(omega, amplitudes.col(j), n);
    lin.m.middleRows(static_cast<Eigen::Index>(j) * n, n) = mj;
    lin.target.segment(static_cast<Eigen::Index>(j) * n, n) = residual.col(j) + mj * deviation;
  }
  return lin;
}

double objective_at(const Eigen::MatrixXd& y, const Eigen::VectorXd& omega,
                    const Eigen::MatrixXd* frozen_u) {
  const DesignMatrix design = build_design(omega, static_cast<int>(y.rows()));
  const Eigen::MatrixXd u = frozen_u ? *frozen_u : amplitude_ls(design, y);
  return (y - design.V * u).squaredNorm();
}

}  // namespace

MapResult map_refine(const MapProblem& problem) {
  problem.validate();
  const int n = static_cast<int>(problem.y.rows());

  Eigen::MatrixXd frozen_u;
  if (!problem.refresh_amplitudes)
    frozen_u = amplitude_ls(build_design(problem.theta0, n), problem.y);
  const Eigen::MatrixXd* frozen = problem.refresh_amplitudes ? nullptr : &frozen_u;

  MapResult result;
  Eigen::VectorXd omega = problem.theta0;
  double current_obj = objective_at(problem.y, omega, frozen);
  result.objective_trace.push_back(current_obj);
  Eigen::VectorXd best_omega = omega;
  double best_obj = current_obj;

  for (int k = 0; k < problem.max_iters; ++k) {
    const Eigen::MatrixXd amplitudes =
        frozen ? *frozen : amplitude_ls(build_design(omega, n), problem.y);
    const Linearization lin = linearize(problem.y, omega, problem.theta0, amplitudes);

    double lambda = problem.ridge0 / static_cast<double>(k + 1);
    const Eigen::MatrixXd gram = lin.m.transpose() * lin.m;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gram_eig(gram);
    const double gmax = gram_eig.eigenvalues().maxCoeff();
    const double gmin = gram_eig.eigenvalues().minCoeff();
    if (lambda == 0.0 && !(gmin > kSingularRatio * std::max(gmax, 1e-300))) {
      lambda = 1e-2 * gmax;  // spectral-norm based bump
      result.ridge_bumped = true;
    }

    Eigen::VectorXd deviation = box_projected_ls(lin.m, lin.target, problem.w, lambda);
    Eigen::VectorXd candidate = problem.theta0 + deviation;

    if (problem.enforce_descent) {
      double cand_obj = objective_at(problem.y, candidate, frozen);
      int halvings = 0;
      while (cand_obj > current_obj && halvings < 40) {
        candidate = 0.5 * (candidate + omega);  // both endpoints feasible, so the midpoint is too
        cand_obj = objective_at(problem.y, candidate, frozen);
        ++halvings;
      }
      if (cand_obj > current_obj) candidate = omega;  // no improving point on the segment
    }

    const double step = (candidate - omega).cwiseAbs().maxCoeff();
    omega = candidate;
    current_obj = objective_at(problem.y, omega, frozen);
    result.objective_trace.push_back(current_obj);
    ++result.iterations;
    if (current_obj < best_obj) {
      best_obj = current_obj;
      best_omega = omega;
    }
    if (step < problem.tol) {
      result.converged = true;
      break;
    }
  }

  result.omega_map = result.converged ? omega : best_omega;
  return result;
}

}  // namespace specband
