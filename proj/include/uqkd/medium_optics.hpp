#pragma once

#include <optional>

namespace uqkd {

/// Two-term Henyey-Greenstein phase function parameters: a forward lobe with
/// asymmetry `g_forward` mixed with weight `forward_weight` against a backward
/// lobe with asymmetry `-g_backward`.
struct TthgParams {
  double forward_weight = 1.0;
  double g_forward = 0.0;
  double g_backward = 0.0;

  /// Throws DomainError unless weight is in [0,1] and both |g| < 1.
  void validate() const;
};

/// Result of solving the TTHG parameters from a mean scattering cosine.
struct TthgSolution {
  TthgParams params;
  double residual = 0.0;   // |mean_cosine(params) - target|
  int roots_found = 0;     // sign changes seen on the scan grid; the largest g_F root is kept
};

/// Optical constants of a homogeneous water column. Immutable once built.
class WaterMedium {
 public:
  /// Validates: alpha >= 0, beta > 0, extinction == alpha + beta (1e-12 relative),
  /// n > 1, mean cosine in (-1, 1), and backscatter fraction (if given) in [0, 0.5).
  WaterMedium(double absorption, double scattering, double extinction, double refractive_index,
              double mean_cos_theta, std::optional<double> backscatter_fraction = std::nullopt);

  /// Convenience: extinction computed as absorption + scattering.
  static WaterMedium from_coefficients(double absorption, double scattering,
                                       double refractive_index, double mean_cos_theta);

  double absorption() const noexcept { return absorption_; }
  double scattering() const noexcept { return scattering_; }
  double extinction() const noexcept { return extinction_; }
  double refractive_index() const noexcept { return refractive_index_; }
  double mean_cos_theta() const noexcept { return mean_cos_theta_; }
  std::optional<double> backscatter_fraction() const noexcept { return backscatter_fraction_; }

  /// Single-scattering albedo beta / extinction.
  double albedo() const noexcept { return scattering_ / extinction_; }

 private:
  double absorption_;
  double scattering_;
  double extinction_;
  double refractive_index_;
  double mean_cos_theta_;
  std::optional<double> backscatter_fraction_;
};

/// Henyey-Greenstein density over the polar angle, normalized so that
/// integral_0^pi hg_pdf(t, g) sin(t) dt = 1.
double hg_pdf(double theta, double g);

/// a * hg_pdf(theta, g_F) + (1 - a) * hg_pdf(theta, -g_B).
double tthg_pdf(double theta, const TthgParams& params);

// Empirical relations tying the TTHG parameters to the mean cosine.
double backward_asymmetry_from_forward(double g_forward);
double forward_weight_from_asymmetries(double g_forward, double g_backward);
double mean_cosine(const TthgParams& params);

/// TTHG parameters for a given forward asymmetry, with g_B and a eliminated.
TthgParams tthg_from_forward_asymmetry(double g_forward);

/// Bisection on g_F over [1e-6, 1 - 1e-6]. Requires mean_cos in (0, 1).
/// Throws ConvergenceError when no bracket exists or the residual stays above 1e-9.
TthgSolution solve_tthg_from_mean_cosine(double mean_cos);

/// Approximation 2(1 - 2B) / (2 + B) for backscatter fraction B in [0, 0.5].
double mean_cosine_from_backscatter(double backscatter_fraction);

/// Inverse-CDF draw of the HG cosine. Falls back to isotropic for |g| < 1e-9.
double sample_hg_cosine(double g, double u);

/// Draws a TTHG scattering angle: `u_lobe` picks the forward lobe with
/// probability a, `u_angle` inverts the chosen lobe's CDF. Both in [0, 1).
double sample_scattering_angle(const TthgParams& params, double u_lobe, double u_angle);

}  // namespace uqkd
