#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <vector>

#include "uqkd/constants.hpp"
#include "uqkd/medium_optics.hpp"

namespace uqkd {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const noexcept { return std::sqrt(x * x + y * y + z * z); }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double dot(const Vec3& a, const Vec3& b) noexcept { return a.x * b.x + a.y * b.y + a.z * b.z; }

/// One photon packet in flight.
struct PhotonState {
  Vec3 position;
  Vec3 direction;  // unit length
  double weight = 1.0;
  double path_length = 0.0;  // metres travelled so far
};

struct TransmitterSpec {
  double beam_radius = 0.003;               // r0, m
  double max_divergence = deg_to_rad(20);   // rad, in [0, pi/2)
  double wavelength = 532e-9;               // m
  double photons_per_pulse = 1.0;           // n_S

  void validate() const;
};

struct ReceiverGeometry {
  double link_distance = 10.0;      // m, receiver plane at z = L
  double aperture_diameter = 0.2;   // m, photons accepted within radius d/2

  void validate() const;
};

/// A photon that crossed the receiver plane inside the aperture.
struct ArrivalRecord {
  double hit_x = 0.0;   // m
  double hit_y = 0.0;   // m
  double delay = 0.0;   // s, extra time over the ballistic flight L n / c0
  double aoa = 0.0;     // rad, angle to the +z optical axis
  double weight = 0.0;

  friend bool operator==(const ArrivalRecord&, const ArrivalRecord&) = default;
};

struct PropagationLimits {
  double weight_threshold = 1e-4;
  std::uint64_t max_interactions = 10000;
  double z_min = -10.0;  // m
};

enum class Fate { Arrived, Absorbed, Escaped };

struct PropagationOutcome {
  Fate fate = Fate::Escaped;
  ArrivalRecord record;             // meaningful only when fate == Arrived
  std::uint64_t interactions = 0;   // scattering events before termination
};

template <class T>
concept UniformSource = requires(T& source) {
  { source.uniform() } -> std::convertible_to<double>;
};

/// Launches a photon on the transmitter ring. `u_azimuth` sets phi0 (shared by
/// position and direction), `u_polar` sets theta0 ~ U[-theta_max, theta_max].
PhotonState launch_photon(const TransmitterSpec& tx, double u_azimuth, double u_polar);

/// Free path -ln(q) / extinction, q in (0, 1].
double sample_step(double extinction, double q);

/// w * beta / extinction.
double update_weight(double weight, const WaterMedium& medium);

/// Rotates `dir` by polar angle theta and azimuth phi about itself. Uses the
/// on-axis form when |mu_z| > 0.9999. Throws DomainError for non-unit input.
Vec3 rotate_direction(const Vec3& dir, double theta, double phi);

/// Builds the record for a photon sitting on the receiver plane.
ArrivalRecord make_arrival(const PhotonState& photon, const ReceiverGeometry& rx,
                           double refractive_index);

/// Traces one photon until it crosses z = L, loses its weight, or exceeds the
/// runaway limits. Crossings outside the aperture are reported as Escaped.
template <UniformSource Source>
PropagationOutcome propagate(PhotonState& photon, const WaterMedium& medium,
                             const TthgParams& phase, const ReceiverGeometry& rx, Source& rng,
                             const PropagationLimits& limits) {
  const double plane = rx.link_distance;
  const double accept_radius_sq = 0.25 * rx.aperture_diameter * rx.aperture_diameter;
  PropagationOutcome out;
  for (;;) {
    const double step = sample_step(medium.extinction(), 1.0 - rng.uniform());
    Vec3& pos = photon.position;
    const Vec3& dir = photon.direction;
    const double z_end = pos.z + dir.z * step;
    if (z_end >= plane && dir.z > 0.0) {
      const double to_plane = (plane - pos.z) / dir.z;
      pos.x += dir.x * to_plane;
      pos.y += dir.y * to_plane;
      pos.z = plane;
      photon.path_length += to_plane;
      if (pos.x * pos.x + pos.y * pos.y <= accept_radius_sq) {
        out.fate = Fate::Arrived;
        out.record = make_arrival(photon, rx, medium.refractive_index());
      } else {
        out.fate = Fate::Escaped;
      }
      return out;
    }
    pos.x += dir.x * step;
    pos.y += dir.y * step;
    pos.z = z_end;
    photon.path_length += step;
    if (pos.z < limits.z_min) {
      out.fate = Fate::Escaped;
      return out;
    }

    photon.weight = update_weight(photon.weight, medium);
    ++out.interactions;
    if (photon.weight < limits.weight_threshold) {
      out.fate = Fate::Absorbed;
      return out;
    }
    if (out.interactions >= limits.max_interactions) {
      out.fate = Fate::Escaped;
      return out;
    }
    const double u_lobe = rng.uniform();
    const double u_angle = rng.uniform();
    const double theta = sample_scattering_angle(phase, u_lobe, u_angle);
    const double phi = 2.0 * kPi * rng.uniform();
    photon.direction = rotate_direction(photon.direction, theta, phi);
  }
}

/// Everything a campaign needs beyond photon count and seed.
struct CampaignSetup {
  TransmitterSpec transmitter;
  ReceiverGeometry receiver;
  WaterMedium medium;
  TthgParams phase;
  PropagationLimits limits;
};

struct CampaignStats {
  std::uint64_t launched = 0;
  std::uint64_t arrived = 0;
  std::uint64_t absorbed = 0;
  std::uint64_t escaped = 0;
  double arrived_weight = 0.0;

  friend bool operator==(const CampaignStats&, const CampaignStats&) = default;
};

struct CampaignResult {
  std::vector<ArrivalRecord> records;  // ordered by photon index
  CampaignStats stats;
};

/// Runs `n_photons` independent trajectories across `workers` threads. The
/// output depends only on (setup, n_photons, seed).
CampaignResult run_campaign(const CampaignSetup& setup, std::uint64_t n_photons,
                            std::uint64_t seed, unsigned workers = 1);

}  // namespace uqkd
