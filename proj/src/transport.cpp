#include "uqkd/transport.hpp"

#include <algorithm>
#include <thread>

#include "uqkd/errors.hpp"
#include "uqkd/rng.hpp"

namespace uqkd {

namespace {

constexpr double kNearAxis = 0.9999;
constexpr double kUnitTolerance = 1e-9;

struct ChunkOutput {
  std::vector<ArrivalRecord> records;
  CampaignStats stats;
};

void run_chunk(const CampaignSetup& setup, std::uint64_t seed, std::uint64_t begin,
               std::uint64_t end, ChunkOutput& out) {
  for (std::uint64_t index = begin; index < end; ++index) {
    PhotonStream rng(seed, index);
    const double u_azimuth = rng.uniform();
    const double u_polar = rng.uniform();
    PhotonState photon = launch_photon(setup.transmitter, u_azimuth, u_polar);
    const PropagationOutcome outcome =
        propagate(photon, setup.medium, setup.phase, setup.receiver, rng, setup.limits);
    ++out.stats.launched;
    switch (outcome.fate) {
      case Fate::Arrived:
        ++out.stats.arrived;
        out.records.push_back(outcome.record);
        break;
      case Fate::Absorbed:
        ++out.stats.absorbed;
        break;
      case Fate::Escaped:
        ++out.stats.escaped;
        break;
    }
  }
}

}  // namespace

void TransmitterSpec::validate() const {
  if (!(beam_radius >= 0.0)) throw DomainError("beam radius must be >= 0");
  if (!(max_divergence >= 0.0 && max_divergence < kPi / 2)) {
    throw DomainError("maximum divergence must lie in [0, 90) degrees");
  }
  if (!(wavelength > 0.0)) throw DomainError("wavelength must be > 0");
  if (!(photons_per_pulse > 0.0)) throw DomainError("photons per pulse must be > 0");
}

void ReceiverGeometry::validate() const {
  if (!(link_distance > 0.0)) throw DomainError("link distance must be > 0");
  if (!(aperture_diameter > 0.0)) throw DomainError("aperture diameter must be > 0");
}

PhotonState launch_photon(const TransmitterSpec& tx, double u_azimuth, double u_polar) {
  const double phi0 = 2.0 * kPi * u_azimuth;
  const double theta0 = tx.max_divergence * (2.0 * u_polar - 1.0);
  const double cos_phi = std::cos(phi0);
  const double sin_phi = std::sin(phi0);
  const double sin_theta = std::sin(theta0);
  PhotonState photon;
  photon.position = {tx.beam_radius * cos_phi, tx.beam_radius * sin_phi, 0.0};
  photon.direction = {sin_theta * cos_phi, sin_theta * sin_phi, std::cos(theta0)};
  return photon;
}

double sample_step(double extinction, double q) {
  if (!(q > 0.0 && q <= 1.0)) throw DomainError("step draw must lie in (0, 1]");
  if (!(extinction > 0.0)) throw DomainError("extinction coefficient must be > 0");
  return -std::log(q) / extinction;
}

double update_weight(double weight, const WaterMedium& medium) {
  return weight * medium.albedo();
}

Vec3 rotate_direction(const Vec3& dir, double theta, double phi) {
  if (!(std::abs(dir.norm() - 1.0) <= kUnitTolerance)) {
    throw DomainError("direction must be a unit vector");
  }
  const double cos_t = std::cos(theta);
  const double sin_t = std::sin(theta);
  const double cos_p = std::cos(phi);
  const double sin_p = std::sin(phi);
  Vec3 out;
  if (std::abs(dir.z) > kNearAxis) {
    out = {sin_t * cos_p, sin_t * sin_p, dir.z > 0.0 ? cos_t : -cos_t};
  } else {
    const double s = std::sqrt(1.0 - dir.z * dir.z);
    out.x = sin_t * (dir.x * dir.z * cos_p - dir.y * sin_p) / s + dir.x * cos_t;
    out.y = sin_t * (dir.y * dir.z * cos_p + dir.x * sin_p) / s + dir.y * cos_t;
    out.z = -sin_t * cos_p * s + dir.z * cos_t;
  }
  const double inv = 1.0 / out.norm();
  return {out.x * inv, out.y * inv, out.z * inv};
}

ArrivalRecord make_arrival(const PhotonState& photon, const ReceiverGeometry& rx,
                           double refractive_index) {
  ArrivalRecord record;
  record.hit_x = photon.position.x;
  record.hit_y = photon.position.y;
  record.delay = (photon.path_length - rx.link_distance) * refractive_index / kSpeedOfLight;
  record.aoa = std::acos(std::clamp(photon.direction.z, -1.0, 1.0));
  record.weight = photon.weight;
  return record;
}

CampaignResult run_campaign(const CampaignSetup& setup, std::uint64_t n_photons,
                            std::uint64_t seed, unsigned workers) {
  setup.transmitter.validate();
  setup.receiver.validate();
  setup.phase.validate();

  workers = std::max(1u, workers);
  const std::uint64_t n_chunks = std::min<std::uint64_t>(workers, std::max<std::uint64_t>(n_photons, 1));
  std::vector<ChunkOutput> chunks(n_chunks);
  auto chunk_begin = [&](std::uint64_t c) { return n_photons * c / n_chunks; };

  if (n_chunks == 1) {
    run_chunk(setup, seed, 0, n_photons, chunks[0]);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(n_chunks);
    for (std::uint64_t c = 0; c < n_chunks; ++c) {
      threads.emplace_back(run_chunk, std::cref(setup), seed, chunk_begin(c), chunk_begin(c + 1),
                           std::ref(chunks[c]));
    }
  }

  // Chunks cover ascending index ranges, so concatenation is already in photon order.
  CampaignResult result;
  std::size_t total = 0;
  for (const auto& chunk : chunks) total += chunk.records.size();
  result.records.reserve(total);
  for (const auto& chunk : chunks) {
    result.records.insert(result.records.end(), chunk.records.begin(), chunk.records.end());
    result.stats.launched += chunk.stats.launched;
    result.stats.arrived += chunk.stats.arrived;
    result.stats.absorbed += chunk.stats.absorbed;
    result.stats.escaped += chunk.stats.escaped;
  }
  for (const auto& record : result.records) result.stats.arrived_weight += record.weight;
  return result;
}

}  // namespace uqkd
