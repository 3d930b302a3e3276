#include "uqkd/qber_model.hpp"

#include <cmath>

#include "uqkd/constants.hpp"
#include "uqkd/errors.hpp"

namespace uqkd {

const char* to_string(DarkCountWindow window) {
  return window == DarkCountWindow::BitPeriod ? "bit" : "gate";
}

DarkCountWindow dark_count_window_from_string(const std::string& text) {
  if (text == "bit") return DarkCountWindow::BitPeriod;
  if (text == "gate") return DarkCountWindow::Gate;
  throw DomainError("dark count window must be 'bit' or 'gate', got '" + text + "'");
}

double ReceiverSpec::aperture_area() const {
  const double radius = 0.5 * aperture_diameter;
  return kPi * radius * radius;
}

void ReceiverSpec::validate() const {
  if (!(aperture_diameter > 0.0)) throw DomainError("aperture diameter must be > 0");
  if (!(fov >= 0.0 && fov <= kPi)) throw DomainError("FoV must lie in [0, pi]");
  if (!(filter_width >= 0.0)) throw DomainError("filter width must be >= 0");
  if (!(dark_count_rate >= 0.0)) throw DomainError("dark count rate must be >= 0");
  if (!(gate_time >= 0.0)) throw DomainError("gate time must be >= 0");
}

void EnvironmentSpec::validate() const {
  if (!(surface_irradiance >= 0.0)) throw DomainError("surface irradiance must be >= 0");
  if (!(diffuse_attenuation >= 0.0)) throw DomainError("diffuse attenuation must be >= 0");
  if (!(depth >= 0.0)) throw DomainError("depth must be >= 0");
}

double irradiance_at_depth(const EnvironmentSpec& env) {
  env.validate();
  return env.surface_irradiance * std::exp(-env.diffuse_attenuation * env.depth);
}

double background_count(const ReceiverSpec& rx, const EnvironmentSpec& env, double wavelength) {
  rx.validate();
  const double irradiance = irradiance_at_depth(env);
  return kPi * irradiance * rx.aperture_area() * wavelength * rx.filter_width *
         (1.0 - std::cos(rx.fov)) * rx.gate_time / (2.0 * kPlanck * kSpeedOfLight);
}

NoiseBudget noise_budget(const ReceiverSpec& rx, const EnvironmentSpec& env, double wavelength,
                         double bit_period) {
  if (!(bit_period > 0.0)) throw DomainError("bit period must be > 0");
  NoiseBudget budget;
  budget.background = background_count(rx, env, wavelength);
  const double window = rx.dark_count_window == DarkCountWindow::BitPeriod ? bit_period : rx.gate_time;
  budget.dark = rx.dark_count_rate * window;
  budget.noise = budget.dark + budget.background / 2.0;
  return budget;
}

double qber(double gamma, double photons_per_pulse, const NoiseBudget& noise) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("gamma must lie in [0, 1]");
  if (!(photons_per_pulse > 0.0)) throw DomainError("photons per pulse must be > 0");
  if (!(noise.noise >= 0.0)) throw DomainError("noise count must be >= 0");
  const double denom = gamma * photons_per_pulse / 2.0 + 2.0 * noise.noise;
  if (!(denom > 0.0)) throw DomainError("QBER undefined without signal or noise");
  return noise.noise / denom;
}

}  // namespace uqkd
