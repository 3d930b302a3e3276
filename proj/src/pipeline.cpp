#include "uqkd/pipeline.hpp"

#include "uqkd/constants.hpp"

namespace uqkd {

ArrivalSet simulate(const LinkConfig& config) {
  const CampaignSetup setup = config.campaign_setup();
  return make_arrival_set(run_campaign(setup, config.photons, config.seed, config.workers),
                          campaign_text(config), config.seed);
}

ChannelSelection resolve_selection(const LinkConfig& config, const ArrivalSet& arrivals) {
  ChannelSelection selection{0.0, 0.0, config.quantile_level, config.link_distance_m};
  if (config.bit_period_s) {
    selection.bit_period = *config.bit_period_s;
  } else {
    const auto period = select_bit_period(arrivals, config.quantile_level, config.quantile_weighting);
    selection.bit_period = config.pin_rounded ? period.rounded : period.raw;
  }
  if (config.fov_deg) {
    selection.fov = deg_to_rad(*config.fov_deg);
  } else {
    const auto fov = select_fov(arrivals, config.quantile_level, config.quantile_weighting);
    selection.fov = config.pin_rounded ? fov.rounded : fov.raw;
  }
  selection.validate();
  return selection;
}

std::vector<double> resolve_gate_grid(const LinkConfig& config, const ChannelSelection& selection) {
  if (config.gate_grid) return parse_gate_grid(*config.gate_grid);
  return default_gate_grid(selection.bit_period);
}

Table2Row analyze_row(const LinkConfig& config, const ArrivalSet& arrivals) {
  Table2Row row;
  row.beam_radius_m = config.beam_radius_m;
  row.divergence_deg = config.divergence_deg;
  row.link_distance_m = config.link_distance_m;
  row.bit_period = select_bit_period(arrivals, config.quantile_level, config.quantile_weighting);
  row.fov = select_fov(arrivals, config.quantile_level, config.quantile_weighting);
  const ChannelSelection selection = resolve_selection(config, arrivals);
  const auto grid = resolve_gate_grid(config, selection);
  row.sweep = sweep_gate(arrivals, selection, config.sweep_context(), grid);
  return row;
}

Table2Row table2_row(LinkConfig config, std::uint64_t n_photons, std::uint64_t seed) {
  config.photons = n_photons;
  config.seed = seed;
  return analyze_row(config, simulate(config));
}

}  // namespace uqkd
