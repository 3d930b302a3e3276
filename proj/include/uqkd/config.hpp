#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "uqkd/gate_optimizer.hpp"
#include "uqkd/link_analysis.hpp"
#include "uqkd/medium_optics.hpp"
#include "uqkd/qber_model.hpp"
#include "uqkd/transport.hpp"

namespace uqkd {

/// One experiment, as read from a flat `section.key = value` file. Angles are
/// kept in degrees exactly as written so that the text form round-trips; the
/// accessors hand out SI/radian domain objects.
struct LinkConfig {
  // transmitter
  double beam_radius_m = 0.003;
  double divergence_deg = 20.0;
  double wavelength_m = 532e-9;
  double photons_per_pulse = 1.0;
  // receiver
  double link_distance_m = 10.0;
  double aperture_diameter_m = 0.2;
  double filter_width_m = 30e-9;
  double dark_count_rate_hz = 60.0;
  DarkCountWindow dark_counts_window = DarkCountWindow::BitPeriod;
  // environment
  double surface_irradiance_w_m2 = 1e-3;
  double diffuse_attenuation_per_m = 0.08;
  double depth_m = 100.0;
  // medium
  double absorption_per_m = 0.114;
  double scattering_per_m = 0.037;
  double extinction_per_m = 0.151;
  double refractive_index = 1.33;
  double mean_cos_theta = 0.9675;
  std::optional<double> backscatter_fraction;
  bool mean_cos_from_backscatter = false;
  // analysis
  double quantile_level = 0.999;
  Weighting quantile_weighting = Weighting::Count;
  Weighting gamma_weighting = Weighting::Weight;
  bool pin_rounded = true;
  std::optional<double> bit_period_s;   // overrides the delay quantile
  std::optional<double> fov_deg;        // overrides the AoA quantile
  std::optional<std::string> gate_grid;
  // simulation
  std::uint64_t photons = 10'000'000;
  std::uint64_t seed = 42;
  unsigned workers = 1;
  double weight_threshold = 1e-5;
  std::uint64_t max_interactions = 10'000;
  double z_min_m = -10.0;

  /// Cross-field checks. Throws ConfigError naming the offending key.
  void validate() const;

  TransmitterSpec transmitter() const;
  ReceiverGeometry geometry() const;
  ReceiverSpec receiver_template() const;  // fov / gate left at zero
  EnvironmentSpec environment() const;
  WaterMedium medium() const;
  PropagationLimits limits() const;
  /// Solves the TTHG parameters for the configured mean cosine.
  CampaignSetup campaign_setup() const;
  SweepContext sweep_context() const;

  friend bool operator==(const LinkConfig&, const LinkConfig&) = default;
};

/// Applies `key = value` lines on top of the defaults. Blank lines and `#`
/// comments are ignored; unknown keys and malformed values are errors.
LinkConfig parse_config(const std::string& text);
LinkConfig load_config(const std::filesystem::path& path);

/// Applies one key; used by parse_config and for command-line overrides.
void set_config_value(LinkConfig& config, const std::string& key, const std::string& value);

/// Key-sorted `key = value` lines. Doubles use the shortest round-trip form.
/// `include_runtime` adds keys that cannot change results (worker count).
std::string serialize_config(const LinkConfig& config, bool include_runtime = true);

/// Text that identifies a campaign: the canonical form without runtime keys.
std::string campaign_text(const LinkConfig& config);

/// Lowercase hex SHA-256 of `campaign_text(config)`.
std::string campaign_hash(const LinkConfig& config);

std::string sha256_hex(const std::string& data);

}  // namespace uqkd
