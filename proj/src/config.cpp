#include "uqkd/config.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "uqkd/errors.hpp"

namespace uqkd {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

double parse_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(key, "expected a number, got '" + text + "'");
  }
  return value;
}

std::uint64_t parse_uint(const std::string& key, const std::string& text) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(key, "expected a non-negative integer, got '" + text + "'");
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw ConfigError(key, "expected true or false, got '" + text + "'");
}

struct Field {
  std::string key;
  std::function<void(LinkConfig&, const std::string&)> set;
  std::function<std::optional<std::string>(const LinkConfig&)> get;
  bool runtime = false;
};

Field number(std::string key, double LinkConfig::*member) {
  return {key,
          [member, key](LinkConfig& c, const std::string& v) { c.*member = parse_double(key, v); },
          [member](const LinkConfig& c) { return std::optional(format_double(c.*member)); }};
}

Field optional_number(std::string key, std::optional<double> LinkConfig::*member) {
  return {key,
          [member, key](LinkConfig& c, const std::string& v) { c.*member = parse_double(key, v); },
          [member](const LinkConfig& c) -> std::optional<std::string> {
            if (!(c.*member)) return std::nullopt;
            return format_double(*(c.*member));
          }};
}

Field integer(std::string key, std::uint64_t LinkConfig::*member) {
  return {key,
          [member, key](LinkConfig& c, const std::string& v) { c.*member = parse_uint(key, v); },
          [member](const LinkConfig& c) { return std::optional(std::to_string(c.*member)); }};
}

Field boolean(std::string key, bool LinkConfig::*member) {
  return {key,
          [member, key](LinkConfig& c, const std::string& v) { c.*member = parse_bool(key, v); },
          [member](const LinkConfig& c) { return std::optional<std::string>(c.*member ? "true" : "false"); }};
}

Field weighting(std::string key, Weighting LinkConfig::*member) {
  return {key,
          [member, key](LinkConfig& c, const std::string& v) {
            try {
              c.*member = weighting_from_string(v);
            } catch (const DomainError& e) {
              throw ConfigError(key, e.what());
            }
          },
          [member](const LinkConfig& c) { return std::optional<std::string>(to_string(c.*member)); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(optional_number("analysis.bit_period_s", &LinkConfig::bit_period_s));
    f.push_back(optional_number("analysis.fov_deg", &LinkConfig::fov_deg));
    f.push_back({"analysis.gate_grid",
                 [](LinkConfig& c, const std::string& v) {
                   parse_gate_grid(v);
                   c.gate_grid = v;
                 },
                 [](const LinkConfig& c) { return c.gate_grid; }});
    f.push_back(weighting("analysis.gamma_weighting", &LinkConfig::gamma_weighting));
    f.push_back(boolean("analysis.pin_rounded", &LinkConfig::pin_rounded));
    f.push_back(number("analysis.quantile_level", &LinkConfig::quantile_level));
    f.push_back(weighting("analysis.quantile_weighting", &LinkConfig::quantile_weighting));
    f.push_back(number("environment.depth_m", &LinkConfig::depth_m));
    f.push_back(number("environment.diffuse_attenuation_per_m", &LinkConfig::diffuse_attenuation_per_m));
    f.push_back(number("environment.surface_irradiance_w_m2", &LinkConfig::surface_irradiance_w_m2));
    f.push_back(number("medium.absorption_per_m", &LinkConfig::absorption_per_m));
    f.push_back(optional_number("medium.backscatter_fraction", &LinkConfig::backscatter_fraction));
    f.push_back(number("medium.extinction_per_m", &LinkConfig::extinction_per_m));
    f.push_back(boolean("medium.mean_cos_from_backscatter", &LinkConfig::mean_cos_from_backscatter));
    f.push_back(number("medium.mean_cos_theta", &LinkConfig::mean_cos_theta));
    f.push_back(number("medium.refractive_index", &LinkConfig::refractive_index));
    f.push_back(number("medium.scattering_per_m", &LinkConfig::scattering_per_m));
    f.push_back(number("receiver.aperture_diameter_m", &LinkConfig::aperture_diameter_m));
    f.push_back(number("receiver.dark_count_rate_hz", &LinkConfig::dark_count_rate_hz));
    f.push_back({"receiver.dark_counts_window",
                 [](LinkConfig& c, const std::string& v) {
                   try {
                     c.dark_counts_window = dark_count_window_from_string(v);
                   } catch (const DomainError& e) {
                     throw ConfigError("receiver.dark_counts_window", e.what());
                   }
                 },
                 [](const LinkConfig& c) {
                   return std::optional<std::string>(to_string(c.dark_counts_window));
                 }});
    f.push_back(number("receiver.filter_width_m", &LinkConfig::filter_width_m));
    f.push_back(number("receiver.link_distance_m", &LinkConfig::link_distance_m));
    f.push_back(integer("simulation.max_interactions", &LinkConfig::max_interactions));
    f.push_back(integer("simulation.photons", &LinkConfig::photons));
    f.push_back(integer("simulation.seed", &LinkConfig::seed));
    f.push_back(number("simulation.weight_threshold", &LinkConfig::weight_threshold));
    Field workers{"simulation.workers",
                  [](LinkConfig& c, const std::string& v) {
                    const auto n = parse_uint("simulation.workers", v);
                    if (n == 0 || n > 1024) throw ConfigError("simulation.workers", "must lie in [1, 1024]");
                    c.workers = static_cast<unsigned>(n);
                  },
                  [](const LinkConfig& c) { return std::optional(std::to_string(c.workers)); }, true};
    f.push_back(workers);
    f.push_back(number("simulation.z_min_m", &LinkConfig::z_min_m));
    f.push_back(number("transmitter.beam_radius_m", &LinkConfig::beam_radius_m));
    f.push_back(number("transmitter.divergence_deg", &LinkConfig::divergence_deg));
    f.push_back(number("transmitter.photons_per_pulse", &LinkConfig::photons_per_pulse));
    f.push_back(number("transmitter.wavelength_m", &LinkConfig::wavelength_m));
    std::sort(f.begin(), f.end(), [](const Field& a, const Field& b) { return a.key < b.key; });
    return f;
  }();
  return table;
}

template <class Fn>
void rethrow_as_config(const std::string& key, Fn&& fn) {
  try {
    fn();
  } catch (const DomainError& e) {
    throw ConfigError(key, e.what());
  }
}

}  // namespace

void LinkConfig::validate() const {
  auto require = [](bool ok, const char* key, const std::string& message) {
    if (!ok) throw ConfigError(key, message);
  };
  require(beam_radius_m >= 0.0, "transmitter.beam_radius_m", "must be >= 0");
  require(divergence_deg >= 0.0 && divergence_deg < 90.0, "transmitter.divergence_deg",
          "must lie in [0, 90)");
  require(wavelength_m > 0.0, "transmitter.wavelength_m", "must be > 0");
  require(photons_per_pulse > 0.0, "transmitter.photons_per_pulse", "must be > 0");
  require(link_distance_m > 0.0, "receiver.link_distance_m", "must be > 0");
  require(aperture_diameter_m > 0.0, "receiver.aperture_diameter_m", "must be > 0");
  require(filter_width_m >= 0.0, "receiver.filter_width_m", "must be >= 0");
  require(dark_count_rate_hz >= 0.0, "receiver.dark_count_rate_hz", "must be >= 0");
  require(surface_irradiance_w_m2 >= 0.0, "environment.surface_irradiance_w_m2", "must be >= 0");
  require(diffuse_attenuation_per_m >= 0.0, "environment.diffuse_attenuation_per_m", "must be >= 0");
  require(depth_m >= 0.0, "environment.depth_m", "must be >= 0");
  require(absorption_per_m >= 0.0, "medium.absorption_per_m", "must be >= 0");
  require(scattering_per_m > 0.0, "medium.scattering_per_m", "must be > 0");
  require(scattering_per_m <= extinction_per_m, "medium.scattering_per_m",
          fmt::format("scattering coefficient {} exceeds extinction coefficient {} (beta <= extinction)",
                      scattering_per_m, extinction_per_m));
  require(std::abs(absorption_per_m + scattering_per_m - extinction_per_m) <= 1e-12 * extinction_per_m,
          "medium.extinction_per_m",
          fmt::format("must equal absorption + scattering ({} + {} != {})", absorption_per_m,
                      scattering_per_m, extinction_per_m));
  require(refractive_index > 1.0, "medium.refractive_index", "must be > 1");
  if (mean_cos_from_backscatter) {
    require(backscatter_fraction.has_value(), "medium.backscatter_fraction",
            "required when medium.mean_cos_from_backscatter = true");
  } else {
    require(mean_cos_theta > 0.0 && mean_cos_theta < 1.0, "medium.mean_cos_theta", "must lie in (0, 1)");
  }
  if (backscatter_fraction) {
    require(*backscatter_fraction >= 0.0 && *backscatter_fraction < 0.5, "medium.backscatter_fraction",
            "must lie in [0, 0.5)");
  }
  require(quantile_level > 0.0 && quantile_level < 1.0, "analysis.quantile_level", "must lie in (0, 1)");
  if (bit_period_s) require(*bit_period_s > 0.0, "analysis.bit_period_s", "must be > 0");
  if (fov_deg) require(*fov_deg > 0.0 && *fov_deg <= 180.0, "analysis.fov_deg", "must lie in (0, 180]");
  if (gate_grid && bit_period_s) {
    const auto grid = parse_gate_grid(*gate_grid);
    require(!grid.empty() && grid.back() <= *bit_period_s * (1 + 1e-12), "analysis.gate_grid",
            "gate times must not exceed analysis.bit_period_s");
  }
  require(workers >= 1, "simulation.workers", "must be >= 1");
  require(weight_threshold > 0.0 && weight_threshold < 1.0, "simulation.weight_threshold",
          "must lie in (0, 1)");
  require(max_interactions >= 1, "simulation.max_interactions", "must be >= 1");
  require(z_min_m < 0.0, "simulation.z_min_m", "must be < 0");
}

TransmitterSpec LinkConfig::transmitter() const {
  return {beam_radius_m, deg_to_rad(divergence_deg), wavelength_m, photons_per_pulse};
}

ReceiverGeometry LinkConfig::geometry() const { return {link_distance_m, aperture_diameter_m}; }

ReceiverSpec LinkConfig::receiver_template() const {
  ReceiverSpec rx;
  rx.aperture_diameter = aperture_diameter_m;
  rx.filter_width = filter_width_m;
  rx.dark_count_rate = dark_count_rate_hz;
  rx.dark_count_window = dark_counts_window;
  return rx;
}

EnvironmentSpec LinkConfig::environment() const {
  return {surface_irradiance_w_m2, diffuse_attenuation_per_m, depth_m};
}

WaterMedium LinkConfig::medium() const {
  const double mean_cos =
      mean_cos_from_backscatter ? mean_cosine_from_backscatter(backscatter_fraction.value()) : mean_cos_theta;
  return WaterMedium(absorption_per_m, scattering_per_m, extinction_per_m, refractive_index, mean_cos,
                     backscatter_fraction);
}

PropagationLimits LinkConfig::limits() const { return {weight_threshold, max_interactions, z_min_m}; }

CampaignSetup LinkConfig::campaign_setup() const {
  validate();
  const WaterMedium water = medium();
  return {transmitter(), geometry(), water, solve_tthg_from_mean_cosine(water.mean_cos_theta()).params,
          limits()};
}

SweepContext LinkConfig::sweep_context() const {
  return {receiver_template(), environment(), wavelength_m, photons_per_pulse, gamma_weighting};
}

void set_config_value(LinkConfig& config, const std::string& key, const std::string& value) {
  const auto& table = fields();
  const auto it = std::lower_bound(table.begin(), table.end(), key,
                                   [](const Field& f, const std::string& k) { return f.key < k; });
  if (it == table.end() || it->key != key) throw ConfigError(key, "unknown configuration key");
  rethrow_as_config(key, [&] { it->set(config, value); });
}

LinkConfig parse_config(const std::string& text) {
  LinkConfig config;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("", fmt::format("line {}: expected 'key = value'", line_no));
    }
    set_config_value(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

LinkConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("{}: cannot open config file", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const LinkConfig& config, bool include_runtime) {
  std::string out;
  for (const auto& field : fields()) {
    if (field.runtime && !include_runtime) continue;
    if (const auto value = field.get(config)) out += fmt::format("{} = {}\n", field.key, *value);
  }
  return out;
}

std::string campaign_text(const LinkConfig& config) { return serialize_config(config, false); }

std::string sha256_hex(const std::string& data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string campaign_hash(const LinkConfig& config) { return sha256_hex(campaign_text(config)); }

}  // namespace uqkd
