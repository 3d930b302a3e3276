#pragma once

#include <cstdint>
#include <vector>

#include "uqkd/arrivals_store.hpp"
#include "uqkd/config.hpp"
#include "uqkd/gate_optimizer.hpp"
#include "uqkd/link_analysis.hpp"

namespace uqkd {

/// Runs the configured campaign and wraps it with the campaign text as header.
ArrivalSet simulate(const LinkConfig& config);

/// Bit period and FoV for a config/arrival pair. Pinned values in the config
/// win over quantiles; otherwise `pin_rounded` picks presentation or raw values.
ChannelSelection resolve_selection(const LinkConfig& config, const ArrivalSet& arrivals);

/// The configured gate grid, or the default grid for the selected bit period.
std::vector<double> resolve_gate_grid(const LinkConfig& config, const ChannelSelection& selection);

/// One line of the bit-period / FoV / optimal-gate table.
struct Table2Row {
  double beam_radius_m = 0.0;
  double divergence_deg = 0.0;
  double link_distance_m = 0.0;
  QuantileSelection bit_period;
  QuantileSelection fov;
  GateSweepResult sweep;
};

/// Selection and sweep on an existing arrival set.
Table2Row analyze_row(const LinkConfig& config, const ArrivalSet& arrivals);

/// Full pipeline: campaign, quantile selection, gate sweep.
Table2Row table2_row(LinkConfig config, std::uint64_t n_photons, std::uint64_t seed);

}  // namespace uqkd
