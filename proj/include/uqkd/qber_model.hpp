#pragma once

#include <string>

namespace uqkd {

/// Window over which dark counts accumulate.
enum class DarkCountWindow { BitPeriod, Gate };

const char* to_string(DarkCountWindow window);
DarkCountWindow dark_count_window_from_string(const std::string& text);

struct ReceiverSpec {
  double aperture_diameter = 0.2;   // m
  double fov = 0.0;                 // rad, half-angle of the acceptance cone
  double filter_width = 30e-9;      // m
  double dark_count_rate = 60.0;    // Hz
  double gate_time = 0.0;           // s
  DarkCountWindow dark_count_window = DarkCountWindow::BitPeriod;

  double aperture_area() const;
  void validate() const;
};

struct EnvironmentSpec {
  double surface_irradiance = 1e-3;   // W/m^2 at the sea surface
  double diffuse_attenuation = 0.08;  // 1/m
  double depth = 100.0;               // m

  void validate() const;
};

struct NoiseBudget {
  double background = 0.0;  // n_B, per gate
  double dark = 0.0;        // n_D, per bit
  double noise = 0.0;       // n_N = n_D + n_B / 2, per detector
};

/// Ambient irradiance after exponential decay to the receiver depth.
double irradiance_at_depth(const EnvironmentSpec& env);

/// Mean background photons collected during one gate.
double background_count(const ReceiverSpec& rx, const EnvironmentSpec& env, double wavelength);

NoiseBudget noise_budget(const ReceiverSpec& rx, const EnvironmentSpec& env, double wavelength,
                         double bit_period);

/// Sifted-key error rate n_N / (gamma n_S / 2 + 2 n_N). Throws DomainError
/// when the denominator vanishes (no signal and no noise).
double qber(double gamma, double photons_per_pulse, const NoiseBudget& noise);

}  // namespace uqkd
