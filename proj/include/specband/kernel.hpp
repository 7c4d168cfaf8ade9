// SPDX-License-Identifier: Apache-2.0
//
// specband: empirical-Bayes frequency estimation for noisy multi-sinusoid signals
#ifndef SPECBAND_KERNEL_HPP
#define SPECBAND_KERNEL_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace specband {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

/// sin(x)/x with the removable singularity filled in.
inline double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

/// Hyperparameters of the uniform frequency prior: each hidden angular
/// frequency omega_l is uniform on [theta_l - W, theta_l + W].
///
/// A strictly valid prior needs theta_l > W and pairwise-disjoint
/// symmetrized supports.  Kernel evaluation tolerates degenerate settings
/// (theta = 0, W = pi) since the covariance formula extends continuously;
/// call validate() where the prior semantics matter (sampling, supports).
struct PriorHyperParams {
  std::vector<double> centers;  // theta_l, radians/sample, in (0, pi)
  double half_bandwidth = 0.0;  // W, radians
  double amp_variance = 1.0;    // sigma^2
  double noise_variance = 0.0;  // sigma_w^2

  int nu() const { return static_cast<int>(centers.size()); }

  /// Throws std::invalid_argument unless theta_l > W for all l, the
  /// symmetrized supports are pairwise disjoint (|theta_i - theta_j| > 2W
  /// and theta_l + W < pi), sigma^2 > 0 and sigma_w^2 >= 0.
  void validate() const;
  bool is_valid() const;
};

/// Union of finitely many pairwise-disjoint closed subintervals of [-pi, pi].
struct FrequencyBand {
  struct Interval {
    double lo = 0.0;
    double hi = 0.0;
  };
  std::vector<Interval> intervals;  // kept sorted by lo

  double measure() const;
  /// True when for every [a,b] the mirror [-b,-a] is also present (tol 1e-12).
  bool is_symmetric() const;
  void validate() const;  // disjointness, measure in (0, 2pi], bounds

  static FrequencyBand full();                       // [-pi, pi]
  static FrequencyBand interval(double lo, double hi);
  /// Symmetrized prior support S = union_l [theta_l-W, theta_l+W] u [-theta_l-W, -theta_l+W].
  static FrequencyBand prior_support(const PriorHyperParams& p);
};

/// Symmetric Toeplitz matrix stored by its first column.
struct ToeplitzCovariance {
  Eigen::VectorXd first_column;

  int size() const { return static_cast<int>(first_column.size()); }
  Eigen::MatrixXd dense() const;
};

/// Full symmetric eigendecomposition, eigenvalues nonincreasing with
/// matching orthonormal eigenvector columns.
struct EigenSystem {
  Eigen::VectorXd values;   // nonincreasing
  Eigen::MatrixXd vectors;  // columns aligned with values

  int size() const { return static_cast<int>(values.size()); }
  /// Orthonormality to 1e-10 and reconstruction of `reference` to 1e-8
  /// relative; O(N^3), meant for tests.
  bool check_against(const Eigen::MatrixXd& reference) const;
};

EigenSystem eigen_decompose(const Eigen::MatrixXd& symmetric);
EigenSystem eigen_decompose(const ToeplitzCovariance& cov);

/// Modulated-sinc covariance of the signal at integer lag tau:
///   K(tau) = sigma^2 * sinc(W tau) * sum_l cos(theta_l tau).
/// Noise excluded; the prior average of cos(omega tau) in closed form.
double modulated_sinc_cov(const PriorHyperParams& p, long tau);

/// N x N signal covariance K_N, first_column[tau] = modulated_sinc_cov(tau).
ToeplitzCovariance build_signal_cov(const PriorHyperParams& p, int n);

/// Observed covariance Sigma_N = K_N + sigma_w^2 I.
ToeplitzCovariance build_observed_cov(const PriorHyperParams& p, int n);

/// Ideal bandpass impulse response rho(t) = (1/2pi) int_J e^{i t w} dw,
/// closed form per interval.  rho(-t) = conj(rho(t)).
std::complex<double> bandpass_impulse_response(const FrequencyBand& band, long t);

/// Time/band energy-concentration matrix R[j,k] = rho(j-k) for a band
/// symmetric about the origin (real symmetric case; asymmetric bands are
/// rejected).  Eigenvalues lie in [0, 1] up to roundoff.
ToeplitzCovariance concentration_matrix(const FrequencyBand& band, int n);

/// Number of eigenvalues >= gamma, gamma in (0,1).
int eigen_count_at_least(const EigenSystem& es, double gamma);

struct TraceIdentityReport {
  double trace_gap = 0.0;  // |sum lambda - N m(J)/2pi|
  double sqsum_gap = 0.0;  // |(1/N) sum lambda^2 - m(J)/2pi|
};

/// Numerical check of the trace identity sum lambda = N m(J)/2pi and of the
/// squared-eigenvalue average tending to m(J)/2pi.
TraceIdentityReport verify_trace_identities(const FrequencyBand& band, int n);

/// Asymptotic numerical rank of K_N: round(2 nu W N / pi), clamped to [1, N].
int theoretical_rank(int nu, double half_bandwidth, int n);

}  // namespace specband

#endif  // SPECBAND_KERNEL_HPP
