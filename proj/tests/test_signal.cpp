// SPDX-License-Identifier: Apache-2.0
//
// specband: empirical-Bayes frequency estimation for noisy multi-sinusoid signals
#include <doctest.h>

#include <cmath>

#include "specband/covest.hpp"
#include "specband/signal.hpp"

using namespace specband;

TEST_CASE("snr_to_noise_variance") {
  CHECK(snr_to_noise_variance(0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(snr_to_noise_variance(15.0, 1.0) == doctest::Approx(std::pow(10.0, -1.5)).epsilon(1e-15));
  CHECK(snr_to_noise_variance(20.0, 4.0) == doctest::Approx(0.04).epsilon(1e-15));
  CHECK_THROWS_AS(snr_to_noise_variance(10.0, 0.0), std::invalid_argument);
}

TEST_CASE("draw_frequencies degenerate and supported") {
  SplitMix64 rng(7);
  PriorHyperParams point;
  point.centers = {1.1, 2.2};
  point.half_bandwidth = 0.0;
  const Eigen::VectorXd omega = draw_frequencies(point, rng);
  CHECK(omega[0] == 1.1);
  CHECK(omega[1] == 2.2);

  // Fig.-scale parameters: draws stay inside the stated band.
  PriorHyperParams paper;
  paper.centers = {kTwoPi * 0.3145, kTwoPi * 0.4201};
  paper.half_bandwidth = kTwoPi * 0.0465;
  for (int i = 0; i < 1000; ++i) {
    const Eigen::VectorXd w = draw_frequencies(paper, rng);
    CHECK(w[0] >= kTwoPi * 0.268);
    CHECK(w[0] <= kTwoPi * 0.361);
  }
}

TEST_CASE("draw_frequencies moments over 1e5 draws") {
  SplitMix64 rng(42);
  PriorHyperParams prior;
  prior.centers = {1.3};
  prior.half_bandwidth = 0.3;
  const int draws = 100000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double w = draw_frequencies(prior, rng)[0];
    sum += w;
    sumsq += w * w;
  }
  const double mean = sum / draws;
  const double var = sumsq / draws - mean * mean;
  const double target_var = prior.half_bandwidth * prior.half_bandwidth / 3.0;
  const double se_mean = std::sqrt(target_var / draws);
  CHECK(std::abs(mean - 1.3) <= 3.0 * se_mean);
  CHECK(std::abs(var - target_var) <= 0.05 * target_var);
}

namespace {

PanelConfig paper_panel_config() {
  PanelConfig cfg;
  cfg.prior.centers = {kTwoPi * 0.3145, kTwoPi * 0.4201};
  cfg.prior.half_bandwidth = kTwoPi * 0.0465;
  cfg.prior.amp_variance = 1.3813 * 1.3813 / 3.0;
  cfg.prior.noise_variance = snr_to_noise_variance(15.0, cfg.prior.amp_variance);
  cfg.samples_per_path = 100;
  cfg.snapshot_count = 100;
  cfg.amp_law = AmplitudeLaw::kUniform;
  cfg.seed = 2024;
  return cfg;
}

}  // namespace

TEST_CASE("generate_panel is reproducible and respects supports") {
  const PanelConfig cfg = paper_panel_config();
  const SnapshotPanel a = generate_panel(cfg);
  const SnapshotPanel b = generate_panel(cfg);
  CHECK(a.data == b.data);  // bit-identical
  CHECK(a.truth.omega == b.truth.omega);

  for (int k = 0; k < a.snapshots(); ++k)
    for (int l = 0; l < 2; ++l) {
      const double w = a.truth.omega(k, l);
      CHECK(w >= cfg.prior.centers[l] - cfg.prior.half_bandwidth);
      CHECK(w <= cfg.prior.centers[l] + cfg.prior.half_bandwidth);
    }

  PanelConfig other = cfg;
  other.seed = 2025;
  CHECK(generate_panel(other).data != a.data);
}

TEST_CASE("noiseless degenerate panel is the exact sinusoid") {
  PanelConfig cfg;
  cfg.prior.centers = {0.9};
  cfg.prior.half_bandwidth = 0.0;
  cfg.prior.amp_variance = 1.0;
  cfg.prior.noise_variance = 0.0;
  cfg.samples_per_path = 64;
  cfg.snapshot_count = 3;
  cfg.seed = 5;
  const SnapshotPanel panel = generate_panel(cfg);
  for (int k = 0; k < 3; ++k) {
    CHECK(panel.truth.omega(k, 0) == 0.9);
    for (int t = 1; t <= 64; ++t) {
      const double expected =
          panel.truth.a(k, 0) * std::cos(0.9 * t) + panel.truth.b(k, 0) * std::sin(0.9 * t);
      CHECK(panel.data(k, t - 1) == doctest::Approx(expected).epsilon(1e-15));
    }
  }
}

TEST_CASE("time average of one path matches the stationary covariance") {
  // Single long path with a fixed frequency: (1/N) sum y(t+tau) y(t) tends
  // to (a^2+b^2)/2 cos(w tau) + sigma_w^2 delta(tau).
  PanelConfig cfg;
  cfg.prior.centers = {1.07};
  cfg.prior.half_bandwidth = 0.0;
  cfg.prior.amp_variance = 1.0;
  cfg.prior.noise_variance = 0.25;
  cfg.samples_per_path = 200000;
  cfg.snapshot_count = 1;
  cfg.seed = 99;
  const SnapshotPanel panel = generate_panel(cfg);
  const double a = panel.truth.a(0, 0);
  const double b = panel.truth.b(0, 0);
  const double power = 0.5 * (a * a + b * b);
  const int n = cfg.samples_per_path;
  for (int tau : {0, 1, 2, 5}) {
    double acc = 0.0;
    for (int t = 0; t + tau < n; ++t) acc += panel.data(0, t + tau) * panel.data(0, t);
    acc /= static_cast<double>(n - tau);
    const double expected = power * std::cos(1.07 * tau) + (tau == 0 ? 0.25 : 0.0);
    // Cross and noise-noise terms fluctuate at the 1/sqrt(N) scale.
    const double band = 3.0 * std::sqrt((0.25 * 2.0 * power + 2.0 * 0.25 * 0.25) / n) + 10.0 / n;
    CHECK(std::abs(acc - expected) <= band);
  }
}

TEST_CASE("cross-sectional moments reproduce the modulated-sinc covariance") {
  // E[y(t+tau) y(t)] = K(tau) + sigma_w^2 delta(tau); estimate the moment at
  // fixed t across many snapshots and compare with the kernel formula.
  PanelConfig cfg;
  cfg.prior.centers = {0.8, 1.9};
  cfg.prior.half_bandwidth = 0.12;
  cfg.prior.amp_variance = 0.7;
  cfg.prior.noise_variance = 0.2;
  cfg.samples_per_path = 24;
  cfg.snapshot_count = 60000;
  cfg.amp_law = AmplitudeLaw::kGaussian;
  cfg.seed = 31;
  const SnapshotPanel panel = generate_panel(cfg);
  const int t0 = 4;  // 1-based t = 5
  for (int tau : {0, 1, 3, 7}) {
    double mean = 0.0, meansq = 0.0;
    for (int k = 0; k < cfg.snapshot_count; ++k) {
      const double prod = panel.data(k, t0 + tau) * panel.data(k, t0);
      mean += prod;
      meansq += prod * prod;
    }
    mean /= cfg.snapshot_count;
    meansq /= cfg.snapshot_count;
    const double se = std::sqrt((meansq - mean * mean) / cfg.snapshot_count);
    const double expected =
        modulated_sinc_cov(cfg.prior, tau) + (tau == 0 ? cfg.prior.noise_variance : 0.0);
    CHECK(std::abs(mean - expected) <= 4.0 * se);
  }
}

TEST_CASE("panel config validation") {
  PanelConfig cfg = paper_panel_config();
  cfg.samples_per_path = 1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = paper_panel_config();
  cfg.snapshot_count = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = paper_panel_config();
  cfg.prior.centers = {0.1, 0.2};  // overlapping supports
  CHECK_THROWS_AS(generate_panel(cfg), std::invalid_argument);
}
