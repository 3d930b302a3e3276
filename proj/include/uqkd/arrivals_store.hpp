#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "uqkd/transport.hpp"

namespace uqkd {

struct ArrivalHeader {
  std::string config_text;       // canonical config snapshot
  std::uint64_t n_photons = 0;   // photons launched
  std::uint64_t seed = 0;
  std::string software_version;

  friend bool operator==(const ArrivalHeader&, const ArrivalHeader&) = default;
};

struct ArrivalTotals {
  std::uint64_t arrived = 0;
  std::uint64_t absorbed = 0;
  std::uint64_t escaped = 0;
  double arrived_weight = 0.0;

  friend bool operator==(const ArrivalTotals&, const ArrivalTotals&) = default;
};

/// Receiver-plane hits of one campaign, ordered by photon index.
struct ArrivalSet {
  ArrivalHeader header;
  std::vector<ArrivalRecord> records;
  ArrivalTotals totals;

  /// Throws IntegrityError when totals disagree with the records or photon count.
  void check_consistency() const;

  friend bool operator==(const ArrivalSet&, const ArrivalSet&) = default;
};

ArrivalSet make_arrival_set(CampaignResult result, std::string config_text, std::uint64_t seed);

inline constexpr std::uint32_t kArrivalFormatVersion = 1;
inline constexpr std::size_t kRecordBytes = 40;

/// Bytes preceding the record region for a given header.
std::size_t header_size(const ArrivalHeader& header);

// Binary layout (little endian):
//   "UQKD" | u32 version | u64 n_photons | u64 n_records | u64 seed | u64 n_absorbed
//   | u32 len + config text | u32 len + software version | u32 crc32(all preceding bytes)
//   | n_records x (hit_x, hit_y, delay, aoa, weight) as f64 | u32 crc32(record region)
void persist(const ArrivalSet& set, const std::filesystem::path& path);
ArrivalSet load(const std::filesystem::path& path);

/// Columns hit_x_m,hit_y_m,delay_s,aoa_rad,weight; 17 significant digits.
void export_csv(const ArrivalSet& set, const std::filesystem::path& path);

}  // namespace uqkd
