#include "uqkd/medium_optics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uqkd/errors.hpp"

namespace uqkd {

namespace {

constexpr double kBracketLow = 1e-6;
constexpr double kBracketHigh = 1.0 - 1e-6;
constexpr int kMaxBisections = 200;
constexpr double kResidualTolerance = 1e-9;
constexpr int kScanPoints = 4096;

}  // namespace

void TthgParams::validate() const {
  if (!(forward_weight >= 0.0 && forward_weight <= 1.0)) {
    throw DomainError("TTHG forward weight must lie in [0, 1], got " + std::to_string(forward_weight));
  }
  if (!(std::abs(g_forward) < 1.0) || !(std::abs(g_backward) < 1.0)) {
    throw DomainError("TTHG asymmetry factors must satisfy |g| < 1");
  }
}

WaterMedium::WaterMedium(double absorption, double scattering, double extinction,
                         double refractive_index, double mean_cos_theta,
                         std::optional<double> backscatter_fraction)
    : absorption_(absorption),
      scattering_(scattering),
      extinction_(extinction),
      refractive_index_(refractive_index),
      mean_cos_theta_(mean_cos_theta),
      backscatter_fraction_(backscatter_fraction) {
  if (!(absorption >= 0.0)) throw DomainError("absorption coefficient must be >= 0");
  if (!(scattering > 0.0)) throw DomainError("scattering coefficient must be > 0");
  if (!(std::abs(absorption + scattering - extinction) <= 1e-12 * extinction)) {
    throw DomainError("extinction must equal absorption + scattering (" + std::to_string(absorption) +
                      " + " + std::to_string(scattering) + " != " + std::to_string(extinction) + ")");
  }
  if (!(refractive_index > 1.0)) throw DomainError("refractive index must be > 1");
  if (!(mean_cos_theta > -1.0 && mean_cos_theta < 1.0)) {
    throw DomainError("mean scattering cosine must lie in (-1, 1)");
  }
  if (backscatter_fraction && !(*backscatter_fraction >= 0.0 && *backscatter_fraction < 0.5)) {
    throw DomainError("backscatter fraction must lie in [0, 0.5)");
  }
}

WaterMedium WaterMedium::from_coefficients(double absorption, double scattering,
                                           double refractive_index, double mean_cos_theta) {
  return WaterMedium(absorption, scattering, absorption + scattering, refractive_index,
                     mean_cos_theta);
}

double hg_pdf(double theta, double g) {
  if (!(std::abs(g) < 1.0)) throw DomainError("HG asymmetry must satisfy |g| < 1");
  const double denom = 1.0 + g * g - 2.0 * g * std::cos(theta);
  return (1.0 - g * g) / (2.0 * denom * std::sqrt(denom));
}

double tthg_pdf(double theta, const TthgParams& params) {
  params.validate();
  const double a = params.forward_weight;
  return a * hg_pdf(theta, params.g_forward) + (1.0 - a) * hg_pdf(theta, -params.g_backward);
}

double backward_asymmetry_from_forward(double g_forward) {
  const double g = g_forward;
  return -0.3061446 + 1.000568 * g - 0.01826338 * g * g + 0.03643748 * g * g * g;
}

double forward_weight_from_asymmetries(double g_forward, double g_backward) {
  return g_backward * (1.0 + g_backward) /
         ((g_forward + g_backward) * (1.0 + g_backward - g_forward));
}

double mean_cosine(const TthgParams& params) {
  return params.forward_weight * (params.g_forward + params.g_backward) - params.g_backward;
}

TthgParams tthg_from_forward_asymmetry(double g_forward) {
  const double g_backward = backward_asymmetry_from_forward(g_forward);
  return {forward_weight_from_asymmetries(g_forward, g_backward), g_forward, g_backward};
}

TthgSolution solve_tthg_from_mean_cosine(double mean_cos) {
  if (!(mean_cos > 0.0 && mean_cos < 1.0)) {
    throw DomainError("mean cosine must lie in (0, 1) for the TTHG solver");
  }
  auto residual = [mean_cos](double g_forward) {
    return mean_cosine(tthg_from_forward_asymmetry(g_forward)) - mean_cos;
  };

  // Locate every sign change on a uniform scan, then refine the last one.
  int roots = 0;
  double lo = 0.0;
  double hi = 0.0;
  double prev_x = kBracketLow;
  double prev_r = residual(prev_x);
  for (int i = 1; i <= kScanPoints; ++i) {
    const double x = kBracketLow + (kBracketHigh - kBracketLow) * i / kScanPoints;
    const double r = residual(x);
    if (prev_r == 0.0 || (prev_r < 0.0) != (r < 0.0)) {
      ++roots;
      lo = prev_x;
      hi = x;
    }
    prev_x = x;
    prev_r = r;
  }
  if (roots == 0) {
    throw ConvergenceError("no TTHG root for mean cosine " + std::to_string(mean_cos) +
                           " in g_F bracket [" + std::to_string(kBracketLow) + ", " +
                           std::to_string(kBracketHigh) + "]");
  }

  double r_lo = residual(lo);
  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < kMaxBisections; ++iter) {
    mid = 0.5 * (lo + hi);
    const double r_mid = residual(mid);
    if (r_mid == 0.0 || hi - lo < 1e-16) break;
    if ((r_mid < 0.0) == (r_lo < 0.0)) {
      lo = mid;
      r_lo = r_mid;
    } else {
      hi = mid;
    }
  }

  TthgSolution solution{tthg_from_forward_asymmetry(mid), std::abs(residual(mid)), roots};
  if (!(solution.residual < kResidualTolerance)) {
    throw ConvergenceError("TTHG solver residual " + std::to_string(solution.residual) +
                           " above tolerance in bracket [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
  }
  solution.params.validate();
  return solution;
}

double mean_cosine_from_backscatter(double backscatter_fraction) {
  const double b = backscatter_fraction;
  if (!(b >= 0.0 && b <= 0.5)) throw DomainError("backscatter fraction must lie in [0, 0.5]");
  return 2.0 * (1.0 - 2.0 * b) / (2.0 + b);
}

double sample_hg_cosine(double g, double u) {
  if (std::abs(g) < 1e-9) return 2.0 * u - 1.0;
  const double s = (1.0 - g * g) / (1.0 - g + 2.0 * g * u);
  return std::clamp((1.0 + g * g - s * s) / (2.0 * g), -1.0, 1.0);
}

double sample_scattering_angle(const TthgParams& params, double u_lobe, double u_angle) {
  const double g = u_lobe < params.forward_weight ? params.g_forward : -params.g_backward;
  return std::acos(sample_hg_cosine(g, u_angle));
}

}  // namespace uqkd
