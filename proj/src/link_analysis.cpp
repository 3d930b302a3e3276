#include "uqkd/link_analysis.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "uqkd/constants.hpp"
#include "uqkd/errors.hpp"

namespace uqkd {

namespace {

double contribution(const ArrivalRecord& r, Weighting weighting) {
  return weighting == Weighting::Count ? 1.0 : r.weight;
}

template <class Field>
EmpiricalCdf cdf_of(const ArrivalSet& arrivals, Weighting weighting, Field field) {
  std::vector<double> values;
  std::vector<double> weights;
  values.reserve(arrivals.records.size());
  weights.reserve(arrivals.records.size());
  for (const auto& r : arrivals.records) {
    values.push_back(field(r));
    weights.push_back(contribution(r, weighting));
  }
  return EmpiricalCdf(values, weights);
}

void check_level(double level) {
  if (!(level > 0.0 && level <= 1.0)) throw DomainError("quantile level must lie in (0, 1]");
}

}  // namespace

const char* to_string(Weighting weighting) {
  return weighting == Weighting::Count ? "count" : "weight";
}

Weighting weighting_from_string(const std::string& text) {
  if (text == "count") return Weighting::Count;
  if (text == "weight") return Weighting::Weight;
  throw DomainError("weighting must be 'count' or 'weight', got '" + text + "'");
}

EmpiricalCdf::EmpiricalCdf(std::span<const double> values, std::span<const double> weights) {
  if (values.empty()) throw DomainError("empirical CDF needs at least one sample");
  if (values.size() != weights.size()) throw DomainError("values and weights differ in length");

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  double running = 0.0;
  for (std::size_t idx : order) {
    const double w = weights[idx];
    if (!(w > 0.0)) throw DomainError("empirical CDF weights must be positive");
    running += w;
    if (!values_.empty() && values_.back() == values[idx]) {
      cumulative_.back() = running;
    } else {
      values_.push_back(values[idx]);
      cumulative_.push_back(running);
    }
  }
  total_ = running;
  for (double& c : cumulative_) c /= total_;
  cumulative_.back() = 1.0;
}

double EmpiricalCdf::cdf(double x) const {
  const auto it = std::upper_bound(values_.begin(), values_.end(), x);
  if (it == values_.begin()) return 0.0;
  return cumulative_[static_cast<std::size_t>(it - values_.begin()) - 1];
}

double EmpiricalCdf::quantile(double level) const {
  check_level(level);
  const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), level);
  const std::size_t i =
      it == cumulative_.end() ? cumulative_.size() - 1 : static_cast<std::size_t>(it - cumulative_.begin());
  if (i == 0) return values_.front();
  const double f0 = cumulative_[i - 1];
  const double f1 = cumulative_[i];
  const double t = std::clamp((level - f0) / (f1 - f0), 0.0, 1.0);
  return values_[i - 1] + t * (values_[i] - values_[i - 1]);
}

EmpiricalCdf delay_cdf(const ArrivalSet& arrivals, Weighting weighting) {
  if (arrivals.records.empty()) throw DomainError("arrival set is empty");
  return cdf_of(arrivals, weighting, [](const ArrivalRecord& r) { return r.delay; });
}

EmpiricalCdf aoa_cdf(const ArrivalSet& arrivals, Weighting weighting) {
  if (arrivals.records.empty()) throw DomainError("arrival set is empty");
  return cdf_of(arrivals, weighting, [](const ArrivalRecord& r) { return r.aoa; });
}

void write_cdf_csv(const EmpiricalCdf& cdf, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("{}: cannot open for writing", path.string()));
  out << "value,cdf\n";
  const auto values = cdf.values();
  const auto cumulative = cdf.cumulative();
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << fmt::format("{:.17g},{:.17g}\n", values[i], cumulative[i]);
  }
  out.close();
  if (!out) throw IoError(fmt::format("{}: write failed", path.string()));
}

double round_bit_period(double seconds) {
  const double ns = seconds * 1e9;
  // Guard against a quantile that sits on a grid line up to rounding noise.
  constexpr double kSlack = 1e-9;
  if (ns >= 1.0) return std::ceil(ns - kSlack) * 1e-9;
  return std::ceil(ns * 100.0 - kSlack) * 1e-11;
}

double round_fov(double radians) {
  return deg_to_rad(std::ceil(rad_to_deg(radians) - 1e-9));
}

QuantileSelection select_bit_period(const ArrivalSet& arrivals, double level, Weighting weighting) {
  const double raw = std::max(0.0, delay_cdf(arrivals, weighting).quantile(level));
  return {raw, round_bit_period(raw)};
}

QuantileSelection select_fov(const ArrivalSet& arrivals, double level, Weighting weighting) {
  const double raw = aoa_cdf(arrivals, weighting).quantile(level);
  return {raw, std::min(round_fov(raw), kPi)};
}

void ChannelSelection::validate() const {
  if (!(bit_period > 0.0)) throw DomainError("bit period must be > 0");
  if (!(fov > 0.0 && fov <= kPi)) throw DomainError("FoV must lie in (0, pi]");
  if (!(quantile_level > 0.0 && quantile_level < 1.0)) {
    throw DomainError("quantile level must lie in (0, 1)");
  }
}

ChannelSelection select_channel(const ArrivalSet& arrivals, double level, double distance,
                                bool pin_rounded, Weighting weighting) {
  const auto period = select_bit_period(arrivals, level, weighting);
  const auto fov = select_fov(arrivals, level, weighting);
  ChannelSelection selection{pin_rounded ? period.rounded : period.raw,
                             pin_rounded ? fov.rounded : fov.raw, level, distance};
  selection.validate();
  return selection;
}

double gamma(const ArrivalSet& arrivals, double fov, double gate, Weighting weighting) {
  if (arrivals.header.n_photons == 0) return 0.0;
  double accepted = 0.0;
  for (const auto& r : arrivals.records) {
    if (r.aoa <= fov && r.delay <= gate) accepted += contribution(r, weighting);
  }
  return accepted / static_cast<double>(arrivals.header.n_photons);
}

GammaCurve::GammaCurve(const ArrivalSet& arrivals, double fov, Weighting weighting)
    : launched_(static_cast<double>(std::max<std::uint64_t>(arrivals.header.n_photons, 1))) {
  std::vector<std::pair<double, double>> accepted;
  for (const auto& r : arrivals.records) {
    if (r.aoa <= fov) accepted.emplace_back(r.delay, contribution(r, weighting));
  }
  std::sort(accepted.begin(), accepted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  delays_.reserve(accepted.size());
  prefix_.reserve(accepted.size() + 1);
  prefix_.push_back(0.0);
  for (const auto& [delay, w] : accepted) {
    delays_.push_back(delay);
    prefix_.push_back(prefix_.back() + w);
  }
}

double GammaCurve::operator()(double gate) const {
  const auto it = std::upper_bound(delays_.begin(), delays_.end(), gate);
  return prefix_[static_cast<std::size_t>(it - delays_.begin())] / launched_;
}

}  // namespace uqkd
