#include "uqkd/gate_optimizer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "uqkd/errors.hpp"

namespace uqkd {

namespace {

constexpr double kPicosecond = 1e-12;
// Grid points are generated by accumulation in picoseconds; allow rounding noise
// when comparing against the bit period.
constexpr double kGridSlack = 1e-18;

double parse_seconds(const std::string& token) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  while (first != last && *first == ' ') ++first;
  while (last != first && *(last - 1) == ' ') --last;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) throw DomainError("invalid gate time '" + token + "'");
  return value;
}

GatePoint evaluate(double gate, double gamma_value, const ChannelSelection& selection,
                   const SweepContext& context) {
  ReceiverSpec rx = context.receiver;
  rx.fov = selection.fov;
  rx.gate_time = gate;
  const NoiseBudget noise = noise_budget(rx, context.environment, context.wavelength, selection.bit_period);
  return {gate, gamma_value, noise.background, noise.noise,
          qber(gamma_value, context.photons_per_pulse, noise)};
}

}  // namespace

std::vector<double> default_gate_grid(double bit_period) {
  if (!(bit_period > 0.0)) throw DomainError("bit period must be > 0");
  std::vector<double> grid;
  const double fine_end = std::min(bit_period, 200 * kPicosecond);
  for (int ps = 1; ps * kPicosecond <= fine_end + kGridSlack; ++ps) grid.push_back(ps * kPicosecond);
  for (long ps = 205; ps * kPicosecond <= bit_period + kGridSlack; ps += 5) {
    grid.push_back(static_cast<double>(ps) * kPicosecond);
  }
  return grid;
}

std::vector<double> parse_gate_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    std::istringstream in(text);
    std::string a, b, c;
    if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, c)) {
      throw DomainError("gate grid range must be start:step:stop");
    }
    const double start = parse_seconds(a);
    const double step = parse_seconds(b);
    const double stop = parse_seconds(c);
    if (!(step > 0.0) || !(stop >= start)) throw DomainError("gate grid range must ascend");
    const auto n = static_cast<long>(std::floor((stop - start) / step * (1 + 1e-12)));
    for (long i = 0; i <= n; ++i) grid.push_back(start + static_cast<double>(i) * step);
  } else {
    std::istringstream in(text);
    std::string token;
    while (std::getline(in, token, ',')) grid.push_back(parse_seconds(token));
  }
  return grid;
}

GateSweepResult sweep_gate(const ArrivalSet& arrivals, const ChannelSelection& selection,
                           const SweepContext& context, std::span<const double> grid) {
  selection.validate();
  if (grid.empty()) throw DomainError("gate grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw DomainError("gate times must be > 0");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw DomainError("gate grid must be strictly ascending");
  }
  if (grid.back() > selection.bit_period * (1 + 1e-12)) {
    throw DomainError("gate time exceeds the bit period");
  }

  const GammaCurve curve(arrivals, selection.fov, context.weighting);
  GateSweepResult result;
  result.selection = selection;
  result.points.reserve(grid.size());
  for (double gate : grid) result.points.push_back(evaluate(gate, curve(gate), selection, context));

  for (std::size_t i = 1; i < result.points.size(); ++i) {
    if (result.points[i].qber < result.points[result.optimal_index].qber) result.optimal_index = i;
  }
  result.optimal_gate = result.points[result.optimal_index].gate;
  result.optimal_qber = result.points[result.optimal_index].qber;
  return result;
}

double qber_at_gate(const ArrivalSet& arrivals, const ChannelSelection& selection,
                    const SweepContext& context, double gate) {
  return evaluate(gate, gamma(arrivals, selection.fov, gate, context.weighting), selection, context).qber;
}

SweepOracleReport verify_sweep_against_oracle(const ArrivalSet& arrivals,
                                              const ChannelSelection& selection,
                                              const SweepContext& context,
                                              std::span<const double> grid) {
  const GateSweepResult sweep = sweep_gate(arrivals, selection, context, grid);
  SweepOracleReport report;

  for (const auto& point : sweep.points) {
    const double reference = qber_at_gate(arrivals, selection, context, point.gate);
    const double scale = std::max(std::abs(reference), std::numeric_limits<double>::min());
    report.max_relative_deviation =
        std::max(report.max_relative_deviation, std::abs(point.qber - reference) / scale);
  }

  std::vector<double> candidates;
  for (const auto& r : arrivals.records) {
    if (r.aoa <= selection.fov && r.delay <= selection.bit_period) candidates.push_back(std::max(r.delay, 0.0));
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  report.brute_qber = std::numeric_limits<double>::infinity();
  for (double gate : candidates) {
    const double value = qber_at_gate(arrivals, selection, context, gate);
    if (value < report.brute_qber) {
      report.brute_qber = value;
      report.brute_gate = gate;
    }
  }
  if (candidates.empty()) {
    // No arrival inside the FoV: every gate sees gamma = 0.
    report.agrees = report.max_relative_deviation <= 1e-12 && sweep.optimal_qber == 0.5;
    return report;
  }

  // Local grid spacing around the brute-force optimum.
  const auto above = std::lower_bound(grid.begin(), grid.end(), report.brute_gate);
  if (above == grid.end()) {
    report.grid_step_at_optimum = grid.size() > 1 ? grid.back() - grid[grid.size() - 2] : grid.back();
  } else if (above == grid.begin()) {
    report.grid_step_at_optimum = *above;
  } else {
    report.grid_step_at_optimum = *above - *(above - 1);
  }

  const bool values_match = report.max_relative_deviation <= 1e-12;
  const bool bounded = report.brute_qber <= sweep.optimal_qber * (1 + 1e-12);
  const bool near_gate =
      std::abs(sweep.optimal_gate - report.brute_gate) <= report.grid_step_at_optimum * (1 + 1e-9);
  // The next grid gate above the brute-force optimum collects at least the same
  // gamma and at most (1 + step / gate) times the noise.
  const bool step_bound =
      above != grid.end() &&
      sweep.optimal_qber <= report.brute_qber * (1 + (*above - report.brute_gate) / report.brute_gate) * (1 + 1e-9);
  report.agrees = values_match && bounded && (near_gate || step_bound);
  return report;
}

}  // namespace uqkd
