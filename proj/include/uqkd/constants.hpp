#pragma once

#include <numbers>

namespace uqkd {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLight = 2.99792458e8;    // m/s
inline constexpr double kPlanck = 6.62607015e-34;        // J s

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

inline constexpr const char* kSoftwareVersion = "0.1.0";

}  // namespace uqkd
