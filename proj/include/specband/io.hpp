// SPDX-License-Identifier: Apache-2.0
//
// specband: empirical-Bayes frequency estimation for noisy multi-sinusoid signals
#ifndef SPECBAND_IO_HPP
#define SPECBAND_IO_HPP

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "specband/covest.hpp"
#include "specband/map.hpp"
#include "specband/subspace.hpp"

namespace specband {

/// Panel CSV: header row y1..yN, then one row of N samples per snapshot.
void write_panel_csv(const std::string& path, const SnapshotPanel& panel);
SnapshotPanel read_panel_csv(const std::string& path);

/// Truth sidecar: prior, seed and the per-snapshot draws.
void write_truth_json(const std::string& path, const PanelConfig& cfg, const SnapshotPanel& panel);

/// PanelConfig from its JSON form; accepts "snr_db" in place of
/// "noise_variance" (not both).
PanelConfig panel_config_from_json(const nlohmann::json& j);

nlohmann::json cov_estimate_to_json(const CovEstimate& est);
nlohmann::json center_estimate_to_json(const CenterEstimate& est);
nlohmann::json map_result_to_json(const MapResult& result);

void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

/// Shortest round-trippable decimal text for a double ("%.17g", with nan
/// spelled out); used everywhere CSV determinism matters.
std::string format_double(double v);

}  // namespace specband

#endif  // SPECBAND_IO_HPP
