#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "uqkd/arrivals_store.hpp"

namespace uqkd {

/// How arrivals contribute to CDFs and received fractions: each photon as one
/// count, or by its surviving packet weight.
enum class Weighting { Count, Weight };

const char* to_string(Weighting weighting);
Weighting weighting_from_string(const std::string& text);

/// Empirical CDF over weighted samples. Equal sample values are merged.
class EmpiricalCdf {
 public:
  /// Throws DomainError when empty, sizes differ, or any weight is not positive.
  EmpiricalCdf(std::span<const double> values, std::span<const double> weights);

  /// Fraction of total weight at or below x (right-continuous step).
  double cdf(double x) const;

  /// Smallest point whose cumulative fraction reaches `level`, linearly
  /// interpolated from the previous point. quantile(1) is the maximum.
  double quantile(double level) const;

  std::span<const double> values() const { return values_; }
  std::span<const double> cumulative() const { return cumulative_; }
  double total_weight() const { return total_; }

 private:
  std::vector<double> values_;
  std::vector<double> cumulative_;  // normalized, last element exactly 1
  double total_ = 0.0;
};

EmpiricalCdf delay_cdf(const ArrivalSet& arrivals, Weighting weighting);
EmpiricalCdf aoa_cdf(const ArrivalSet& arrivals, Weighting weighting);

/// Columns value,cdf; one row per distinct sample value.
void write_cdf_csv(const EmpiricalCdf& cdf, const std::filesystem::path& path);

struct QuantileSelection {
  double raw = 0.0;
  double rounded = 0.0;  // presentation value
};

/// Bit period presentation: ceil to 1 ns, or to 0.01 ns below 1 ns.
double round_bit_period(double seconds);
/// FoV presentation: ceil to a whole degree (returned in radians).
double round_fov(double radians);

/// Delay quantile over every arrival (no FoV filter).
QuantileSelection select_bit_period(const ArrivalSet& arrivals, double level,
                                    Weighting weighting = Weighting::Weight);

/// Angle-of-arrival quantile over every arrival.
QuantileSelection select_fov(const ArrivalSet& arrivals, double level,
                             Weighting weighting = Weighting::Count);

struct ChannelSelection {
  double bit_period = 0.0;  // s
  double fov = 0.0;         // rad, half-angle
  double quantile_level = 0.999;
  double distance = 0.0;    // m

  void validate() const;
};

/// Runs both quantile selections. `pin_rounded` feeds the presentation values
/// downstream instead of the raw quantiles.
ChannelSelection select_channel(const ArrivalSet& arrivals, double level, double distance,
                                bool pin_rounded, Weighting weighting = Weighting::Count);

/// Received fraction: contribution of records with aoa <= fov and delay <= gate,
/// divided by photons launched.
double gamma(const ArrivalSet& arrivals, double fov, double gate,
             Weighting weighting = Weighting::Count);

/// gamma(fov, gate) for many gates at a fixed FoV via a sorted prefix sum.
class GammaCurve {
 public:
  GammaCurve(const ArrivalSet& arrivals, double fov, Weighting weighting = Weighting::Weight);

  double operator()(double gate) const;

 private:
  std::vector<double> delays_;
  std::vector<double> prefix_;  // prefix_[i] = contribution of the first i delays
  double launched_ = 1.0;
};

}  // namespace uqkd
