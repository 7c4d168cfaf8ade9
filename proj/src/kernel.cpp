// SPDX-License-Identifier: Apache-2.0
//
// specband: empirical-Bayes frequency estimation for noisy multi-sinusoid signals
#include "specband/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace specband {

namespace {
constexpr double kSymTol = 1e-12;
}

void PriorHyperParams::validate() const {
  if (centers.empty()) throw std::invalid_argument("prior: at least one center frequency required");
  if (!(half_bandwidth > 0.0) || half_bandwidth >= kPi)
    throw std::invalid_argument("prior: half-bandwidth W must lie in (0, pi)");
  if (!(amp_variance > 0.0)) throw std::invalid_argument("prior: amplitude variance must be positive");
  if (noise_variance < 0.0) throw std::invalid_argument("prior: noise variance must be nonnegative");
  const double w = half_bandwidth;
  for (double theta : centers) {
    if (!(theta > w)) throw std::invalid_argument("prior: need theta > W for disjoint symmetric supports");
    if (!(theta + w < kPi)) throw std::invalid_argument("prior: need theta + W < pi");
  }
  for (std::size_t i = 0; i < centers.size(); ++i)
    for (std::size_t j = i + 1; j < centers.size(); ++j)
      if (!(std::abs(centers[i] - centers[j]) > 2.0 * w))
        throw std::invalid_argument("prior: supports overlap, need |theta_i - theta_j| > 2W");
}

bool PriorHyperParams::is_valid() const {
  try {
    validate();
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

double FrequencyBand::measure() const {
  double m = 0.0;
  for (const auto& iv : intervals) m += iv.hi - iv.lo;
  return m;
}

bool FrequencyBand::is_symmetric() const {
  for (const auto& iv : intervals) {
    bool found = false;
    for (const auto& other : intervals) {
      if (std::abs(other.lo + iv.hi) <= kSymTol && std::abs(other.hi + iv.lo) <= kSymTol) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

void FrequencyBand::validate() const {
  if (intervals.empty()) throw std::invalid_argument("band: empty interval list");
  for (const auto& iv : intervals) {
    if (!(iv.lo < iv.hi)) throw std::invalid_argument("band: degenerate interval");
    if (iv.lo < -kPi - kSymTol || iv.hi > kPi + kSymTol)
      throw std::invalid_argument("band: interval outside [-pi, pi]");
  }
  auto sorted = intervals;
  std::sort(sorted.begin(), sorted.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].lo < sorted[i - 1].hi) throw std::invalid_argument("band: intervals overlap");
  const double m = measure();
  if (!(m > 0.0) || m > kTwoPi + kSymTol) throw std::invalid_argument("band: measure outside (0, 2pi]");
}

FrequencyBand FrequencyBand::full() { return FrequencyBand{{{-kPi, kPi}}}; }

FrequencyBand FrequencyBand::interval(double lo, double hi) { return FrequencyBand{{{lo, hi}}}; }

FrequencyBand FrequencyBand::prior_support(const PriorHyperParams& p) {
  p.validate();
  FrequencyBand band;
  for (double theta : p.centers) {
    band.intervals.push_back({-theta - p.half_bandwidth, -theta + p.half_bandwidth});
    band.intervals.push_back({theta - p.half_bandwidth, theta + p.half_bandwidth});
  }
  std::sort(band.intervals.begin(), band.intervals.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  band.validate();
  return band;
}

Eigen::MatrixXd ToeplitzCovariance::dense() const {
  const int n = size();
  Eigen::MatrixXd m(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) m(j, k) = first_column[std::abs(j - k)];
  return m;
}

bool EigenSystem::check_against(const Eigen::MatrixXd& reference) const {
  const int n = size();
  for (int i = 1; i < n; ++i)
    if (values[i] > values[i - 1]) return false;
  const Eigen::MatrixXd gram = vectors.transpose() * vectors;
  if ((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10) return false;
  const Eigen::MatrixXd rebuilt = vectors * values.asDiagonal() * vectors.transpose();
  return (rebuilt - reference).norm() <= 1e-8 * std::max(reference.norm(), 1e-300);
}

EigenSystem eigen_decompose(const Eigen::MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigen_decompose: solver failed");
  // Eigen returns ascending order; flip to nonincreasing, keeping vectors aligned.
  EigenSystem es;
  es.values = solver.eigenvalues().reverse();
  es.vectors = solver.eigenvectors().rowwise().reverse();
  return es;
}

EigenSystem eigen_decompose(const ToeplitzCovariance& cov) { return eigen_decompose(cov.dense()); }

double modulated_sinc_cov(const PriorHyperParams& p, long tau) {
  double carrier = 0.0;
  for (double theta : p.centers) carrier += std::cos(theta * static_cast<double>(tau));
  return p.amp_variance * sinc(p.half_bandwidth * static_cast<double>(tau)) * carrier;
}

ToeplitzCovariance build_signal_cov(const PriorHyperParams& p, int n) {
  if (n < 2) throw std::invalid_argument("build_signal_cov: need N >= 2");
  ToeplitzCovariance cov;
  cov.first_column.resize(n);
  for (int tau = 0; tau < n; ++tau) cov.first_column[tau] = modulated_sinc_cov(p, tau);
  return cov;
}

ToeplitzCovariance build_observed_cov(const PriorHyperParams& p, int n) {
  ToeplitzCovariance cov = build_signal_cov(p, n);
  cov.first_column[0] += p.noise_variance;
  return cov;
}

std::complex<double> bandpass_impulse_response(const FrequencyBand& band, long t) {
  band.validate();
  if (t == 0) return {band.measure() / kTwoPi, 0.0};
  const double td = static_cast<double>(t);
  std::complex<double> sum{0.0, 0.0};
  const std::complex<double> it{0.0, td};
  for (const auto& iv : band.intervals)
    sum += (std::exp(it * iv.hi) - std::exp(it * iv.lo)) / it;
  return sum / kTwoPi;
}

ToeplitzCovariance concentration_matrix(const FrequencyBand& band, int n) {
  if (n < 1) throw std::invalid_argument("concentration_matrix: need N >= 1");
  band.validate();
  if (!band.is_symmetric())
    throw std::invalid_argument("concentration_matrix: band must be symmetric about the origin");
  ToeplitzCovariance r;
  r.first_column.resize(n);
  for (int t = 0; t < n; ++t) r.first_column[t] = bandpass_impulse_response(band, t).real();
  return r;
}

int eigen_count_at_least(const EigenSystem& es, double gamma) {
  if (!(gamma > 0.0) || !(gamma < 1.0))
    throw std::invalid_argument("eigen_count_at_least: gamma must lie in (0, 1)");
  int count = 0;
  for (int i = 0; i < es.size(); ++i)
    if (es.values[i] >= gamma) ++count;
  return count;
}

TraceIdentityReport verify_trace_identities(const FrequencyBand& band, int n) {
  if (n < 2) throw std::invalid_argument("verify_trace_identities: need N >= 2");
  const EigenSystem es = eigen_decompose(concentration_matrix(band, n));
  const double ratio = band.measure() / kTwoPi;
  TraceIdentityReport report;
  report.trace_gap = std::abs(es.values.sum() - static_cast<double>(n) * ratio);
  report.sqsum_gap = std::abs(es.values.squaredNorm() / static_cast<double>(n) - ratio);
  return report;
}

int theoretical_rank(int nu, double half_bandwidth, int n) {
  const double raw = 2.0 * static_cast<double>(nu) * half_bandwidth * static_cast<double>(n) / kPi;
  const int rounded = static_cast<int>(std::lround(raw));
  return std::clamp(rounded, 1, n);
}

}  // namespace specband
