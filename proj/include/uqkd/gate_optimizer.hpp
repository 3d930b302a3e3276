#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "uqkd/arrivals_store.hpp"
#include "uqkd/link_analysis.hpp"
#include "uqkd/qber_model.hpp"

namespace uqkd {

struct GatePoint {
  double gate = 0.0;   // s
  double gamma = 0.0;
  double background = 0.0;  // n_B
  double noise = 0.0;       // n_N
  double qber = 0.0;
};

struct GateSweepResult {
  std::vector<GatePoint> points;  // ascending gate
  std::size_t optimal_index = 0;  // smallest gate attaining the minimum QBER
  double optimal_gate = 0.0;
  double optimal_qber = 0.0;
  ChannelSelection selection;
};

/// Link parameters the sweep needs beyond the arrivals and selection.
struct SweepContext {
  ReceiverSpec receiver;  // fov and gate_time are overwritten per candidate
  EnvironmentSpec environment;
  double wavelength = 532e-9;
  double photons_per_pulse = 1.0;
  Weighting weighting = Weighting::Weight;  // applied to gamma
};

/// 1 ps steps up to min(bit period, 200 ps), then 5 ps steps to the bit period.
std::vector<double> default_gate_grid(double bit_period);

/// Parses "a,b,c" (seconds) or "start:step:stop" (seconds, inclusive).
std::vector<double> parse_gate_grid(const std::string& text);

/// Evaluates QBER on every grid gate. Throws DomainError when the grid is
/// empty, not strictly ascending, non-positive, or exceeds the bit period.
GateSweepResult sweep_gate(const ArrivalSet& arrivals, const ChannelSelection& selection,
                           const SweepContext& context, std::span<const double> grid);

/// QBER for one gate computed from scratch with the filtering gamma().
double qber_at_gate(const ArrivalSet& arrivals, const ChannelSelection& selection,
                    const SweepContext& context, double gate);

struct SweepOracleReport {
  bool agrees = false;
  double max_relative_deviation = 0.0;  // sweep vs brute-force QBER on grid points
  double brute_gate = 0.0;              // brute-force optimum over distinct delays
  double brute_qber = 0.0;
  double grid_step_at_optimum = 0.0;
};

/// Recomputes the sweep with brute-force filtering, then searches every
/// distinct arrival delay inside the bit period as a candidate gate. Agreement
/// means the grid QBER values match the brute-force ones (1e-12 relative), the
/// brute-force minimum does not exceed the grid minimum, and the grid optimum
/// either lies within one grid step of the brute-force gate or is no worse than
/// the brute-force QBER inflated by the noise growth up to the next grid gate.
SweepOracleReport verify_sweep_against_oracle(const ArrivalSet& arrivals,
                                              const ChannelSelection& selection,
                                              const SweepContext& context,
                                              std::span<const double> grid);

}  // namespace uqkd
