// SPDX-License-Identifier: Apache-2.0
//
// specband: empirical-Bayes frequency estimation for noisy multi-sinusoid signals
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "specband/harness.hpp"
#include "specband/subspace.hpp"

using namespace specband;

TEST_CASE("truncate_eigenvectors") {
  EigenSystem identity;
  identity.values = Eigen::VectorXd::Ones(5);
  identity.vectors = Eigen::MatrixXd::Identity(5, 5);
  const ObservabilitySlice slice = truncate_eigenvectors(identity, 2);
  CHECK(slice.H == Eigen::MatrixXd::Identity(5, 5).leftCols(2));
  CHECK_THROWS_AS(truncate_eigenvectors(identity, 0), std::invalid_argument);
  CHECK_THROWS_AS(truncate_eigenvectors(identity, 5), std::invalid_argument);

  PriorHyperParams p;
  p.centers = {1.0, 2.0};
  p.half_bandwidth = 0.2;
  const EigenSystem es = eigen_decompose(build_signal_cov(p, 40));
  const ObservabilitySlice h = truncate_eigenvectors(es, 39);
  CHECK((h.H.transpose() * h.H - Eigen::MatrixXd::Identity(39, 39)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("truncation at the asymptotic rank keeps nearly all spectral mass") {
  PriorHyperParams p;
  p.centers = {kTwoPi * 0.25};
  p.half_bandwidth = kTwoPi * 0.02;
  const EigenSystem es = eigen_decompose(build_signal_cov(p, 1000));
  const double kept = es.values.head(80).sum();
  CHECK(kept >= 0.99 * es.values.sum());
}

TEST_CASE("procrustes recovers a forward-constructed rotation") {
  SplitMix64 rng(17);
  for (int n : {2, 5, 8}) {
    const Eigen::MatrixXd a0 = oracles::random_orthogonal(n, rng);
    Eigen::RowVectorXd c(n);
    for (int i = 0; i < n; ++i) c[i] = rng.gaussian();
    const Eigen::MatrixXd h = oracles::stacked_observability(c, a0, 40);
    const RotationRealization real = solve_orthogonal_procrustes(h);
    CHECK((real.A.transpose() * real.A - Eigen::MatrixXd::Identity(n, n)).norm() < 1e-8);
    const auto got = oracles::sorted_abs_phases(real.A);
    const auto want = oracles::sorted_abs_phases(a0);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-8));
    CHECK(real.c == h.row(0));
  }
}

TEST_CASE("procrustes on a pure cosine process finds the frequency") {
  const double phi = 0.77;
  Eigen::VectorXd first_column(60);
  for (int tau = 0; tau < 60; ++tau) first_column[tau] = 0.5 * std::cos(phi * tau);
  const EigenSystem es = eigen_decompose(ToeplitzCovariance{first_column});
  const RotationRealization real = solve_orthogonal_procrustes(truncate_eigenvectors(es, 2));
  const PhaseAngles angles = phase_angles(real);
  REQUIRE(angles.positive.size() == 1);
  CHECK(angles.positive[0] == doctest::Approx(phi).epsilon(1e-6));
}

TEST_CASE("procrustes with stationary columns returns the identity") {
  Eigen::RowVectorXd row(2);
  row << 0.6, -0.8;
  const Eigen::MatrixXd h = row.colwise().replicate(10);
  const RotationRealization real = solve_orthogonal_procrustes(h);
  CHECK(real.degenerate_svd);  // rank-1 cross matrix
  CHECK((real.A - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("phase multiset is invariant under orthogonal basis change") {
  SplitMix64 rng(23);
  PriorHyperParams p;
  p.centers = {0.9, 2.0};
  p.half_bandwidth = 0.18;
  const EigenSystem es = eigen_decompose(build_signal_cov(p, 80));
  const int n = theoretical_rank(2, p.half_bandwidth, 80);
  const Eigen::MatrixXd h = truncate_eigenvectors(es, n).H;
  const Eigen::MatrixXd q = oracles::random_orthogonal(n, rng);
  const auto base = oracles::sorted_abs_phases(solve_orthogonal_procrustes(h).A);
  const auto rotated = oracles::sorted_abs_phases(solve_orthogonal_procrustes(Eigen::MatrixXd(h * q)).A);
  REQUIRE(base.size() == rotated.size());
  for (std::size_t i = 0; i < base.size(); ++i)
    CHECK(base[i] == doctest::Approx(rotated[i]).epsilon(1e-8));
}

TEST_CASE("phase_angles folds conjugate pairs and drops the real axis") {
  Eigen::MatrixXd rot(2, 2);
  rot << std::cos(0.5), -std::sin(0.5), std::sin(0.5), std::cos(0.5);
  RotationRealization realization{rot, Eigen::RowVectorXd::Ones(2), false};
  const PhaseAngles one = phase_angles(realization);
  REQUIRE(one.positive.size() == 1);
  CHECK(one.positive[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(one.real_axis_count == 0);

  realization.A = Eigen::MatrixXd::Identity(3, 3);
  realization.c = Eigen::RowVectorXd::Ones(3);
  const PhaseAngles none = phase_angles(realization);
  CHECK(none.positive.empty());
  CHECK(none.real_axis_count == 3);
}

TEST_CASE("cluster_phases") {
  const PhaseClusters two = cluster_phases({0.1, 0.11, 0.5, 0.52}, 2);
  CHECK(two.centers[0] == doctest::Approx(0.105).epsilon(1e-12));
  CHECK(two.centers[1] == doctest::Approx(0.51).epsilon(1e-12));
  CHECK(two.counts[0] == 2);
  CHECK(two.counts[1] == 2);
  CHECK(two.assignment == std::vector<int>{0, 0, 1, 1});

  const PhaseClusters one = cluster_phases({0.2, 0.4, 0.9}, 1);
  CHECK(one.centers[0] == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_WITH_AS(cluster_phases({0.3}, 2), "cluster_phases: insufficient spectral content",
                       std::runtime_error);
}

TEST_CASE("cluster_phases matches the exhaustive partition oracle") {
  SplitMix64 rng(5);
  for (int nu : {2, 3}) {
    for (int rep = 0; rep < 25; ++rep) {
      // Well-separated clumps, the regime the pipeline operates in.
      std::vector<double> phases;
      std::vector<double> clump_centers;
      for (int c = 0; c < nu; ++c) clump_centers.push_back(0.4 + 0.8 * c + rng.uniform(-0.1, 0.1));
      for (int c = 0; c < nu; ++c) {
        const int count = 2 + static_cast<int>(rng.next_u64() % 5);
        for (int i = 0; i < count; ++i) phases.push_back(clump_centers[c] + rng.uniform(-0.12, 0.12));
      }
      const PhaseClusters got = cluster_phases(phases, nu);
      const auto want = oracles::best_contiguous_partition(got.phases, nu);
      CHECK(got.assignment == want);
      for (int c = 0; c + 1 < nu; ++c) CHECK(got.centers[c] < got.centers[c + 1]);
      // Lloyd refinement agrees on separated clumps.
      CHECK(cluster_phases(phases, nu, ClusterMethod::kLloyd).assignment == want);
    }
  }
}

TEST_CASE("discrete_spectrum weights") {
  // Single rotation with c on the plane: all mass at +-phi.
  Eigen::MatrixXd rot(2, 2);
  rot << std::cos(1.1), -std::sin(1.1), std::sin(1.1), std::cos(1.1);
  Eigen::RowVectorXd c(2);
  c << 1.0, 0.0;
  const auto spec = discrete_spectrum({rot, c, false});
  REQUIRE(spec.size() == 2);
  CHECK(spec[0].first == doctest::Approx(-1.1).epsilon(1e-12));
  CHECK(spec[1].first == doctest::Approx(1.1).epsilon(1e-12));
  CHECK(spec[0].second == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(spec[1].second == doctest::Approx(0.5).epsilon(1e-12));

  // Weights sum to c c^T for a generic rotation.
  SplitMix64 rng(9);
  const Eigen::MatrixXd a = oracles::random_orthogonal(6, rng);
  Eigen::RowVectorXd cg(6);
  for (int i = 0; i < 6; ++i) cg[i] = rng.gaussian();
  double total = 0.0;
  for (const auto& [phase, weight] : discrete_spectrum({a, cg, false})) {
    CHECK(weight >= 0.0);
    total += weight;
  }
  CHECK(total == doctest::Approx(cg.squaredNorm()).epsilon(1e-8));
}

TEST_CASE("exact-kernel phases stay inside the prior supports") {
  PriorHyperParams p;
  p.centers = {0.9, 2.0};
  p.half_bandwidth = 0.15;
  const int n = 120;
  const EigenSystem es = eigen_decompose(build_signal_cov(p, n));
  const int rank = theoretical_rank(2, p.half_bandwidth, n);
  const RotationRealization real = solve_orthogonal_procrustes(truncate_eigenvectors(es, rank));
  const double leakage = kTwoPi / n;
  for (double phi : phase_angles(real).positive) {
    bool inside = false;
    for (double theta : p.centers)
      if (phi >= theta - p.half_bandwidth - leakage && phi <= theta + p.half_bandwidth + leakage)
        inside = true;
    CHECK(inside);
  }
}

TEST_CASE("estimate_centers on the degenerate noiseless prior") {
  PanelConfig cfg;
  cfg.prior.centers = {1.1};
  cfg.prior.half_bandwidth = 0.0;  // fixed frequency
  cfg.prior.amp_variance = 1.0;
  cfg.prior.noise_variance = 0.0;
  cfg.samples_per_path = 100;
  cfg.snapshot_count = 40;
  cfg.seed = 77;
  const CenterEstimate est = estimate_centers(generate_panel(cfg), 1);
  CHECK(est.theta_hat[0] == doctest::Approx(1.1).epsilon(1e-3));
}

TEST_CASE("estimate_centers at the figure-6 trial scale") {
  PanelConfig cfg;
  cfg.prior.centers = {kTwoPi * 0.1499, kTwoPi * 0.2524};
  cfg.prior.half_bandwidth = kTwoPi * 0.0155;
  cfg.prior.amp_variance = 1.3813 * 1.3813 / 3.0;
  cfg.prior.noise_variance = snr_to_noise_variance(15.0, cfg.prior.amp_variance);
  cfg.samples_per_path = 100;
  cfg.snapshot_count = 100;
  cfg.amp_law = AmplitudeLaw::kUniform;
  cfg.seed = 4242;
  const SnapshotPanel panel = generate_panel(cfg);
  const CenterEstimate est = estimate_centers(panel, 2);
  const Eigen::Vector2d truth(kTwoPi * 0.1499, kTwoPi * 0.2524);
  CHECK(relative_center_error(est.theta_hat, truth) < 0.02);

  // Most discrete-spectrum mass lies inside the supporting intervals.
  double inside = 0.0, total = 0.0;
  const double leakage = kTwoPi / cfg.samples_per_path;
  for (std::size_t i = 0; i < est.phases.size(); ++i) {
    total += est.weights[i];
    for (double theta : cfg.prior.centers)
      if (est.phases[i] >= theta - cfg.prior.half_bandwidth - leakage &&
          est.phases[i] <= theta + cfg.prior.half_bandwidth + leakage) {
        inside += est.weights[i];
        break;
      }
  }
  CHECK(inside >= 0.9 * total);
}

TEST_CASE("estimate_centers is invariant under amplitude rescaling") {
  PanelConfig cfg;
  cfg.prior.centers = {0.8, 1.7};
  cfg.prior.half_bandwidth = 0.12;
  cfg.prior.amp_variance = 1.0;
  cfg.prior.noise_variance = snr_to_noise_variance(15.0, 1.0);
  cfg.samples_per_path = 80;
  cfg.snapshot_count = 60;
  cfg.seed = 11;
  SnapshotPanel panel = generate_panel(cfg);
  const CenterEstimate base = estimate_centers(panel, 2);
  panel.data *= 3.7;
  const CenterEstimate scaled = estimate_centers(panel, 2);
  CHECK(base.rank_hat == scaled.rank_hat);
  REQUIRE(base.phases.size() == scaled.phases.size());
  for (std::size_t i = 0; i < base.phases.size(); ++i)
    CHECK(base.phases[i] == doctest::Approx(scaled.phases[i]).epsilon(1e-9));
  CHECK((base.theta_hat - scaled.theta_hat).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("estimate_centers honors the rank override") {
  PanelConfig cfg;
  cfg.prior.centers = {0.8, 1.7};
  cfg.prior.half_bandwidth = 0.12;
  cfg.prior.amp_variance = 1.0;
  cfg.prior.noise_variance = snr_to_noise_variance(15.0, 1.0);
  cfg.samples_per_path = 80;
  cfg.snapshot_count = 60;
  cfg.seed = 12;
  SubspaceOptions opts;
  opts.rank_override = 14;
  const CenterEstimate est = estimate_centers(generate_panel(cfg), 2, opts);
  CHECK(est.rank_hat == 14);
  CHECK(est.w_hat == doctest::Approx(bandwidth_from_rank(14, 2, 80)));
}
