#pragma once

#include <unistd.h>

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "uqkd/arrivals_store.hpp"

namespace uqkd::testing {

/// Arrival set with totals derived from the records.
inline ArrivalSet make_set(std::vector<ArrivalRecord> records, std::uint64_t n_photons,
                           std::uint64_t seed = 1, std::string config_text = "receiver.link_distance_m = 10\n") {
  CampaignResult result;
  result.stats.launched = n_photons;
  result.stats.arrived = records.size();
  result.stats.escaped = n_photons - records.size();
  for (const auto& r : records) result.stats.arrived_weight += r.weight;
  result.records = std::move(records);
  return make_arrival_set(std::move(result), std::move(config_text), seed);
}

inline ArrivalSet random_set(std::mt19937_64& gen, std::size_t n_records) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<ArrivalRecord> records;
  for (std::size_t i = 0; i < n_records; ++i) {
    records.push_back({0.2 * u(gen) - 0.1, 0.2 * u(gen) - 0.1, 1e-9 * u(gen), 1.5 * u(gen), u(gen) + 1e-6});
  }
  const std::uint64_t launched = n_records + gen() % 1000;
  auto set = make_set(std::move(records), launched, gen(), "key = " + std::to_string(gen()) + "\n");
  set.totals.absorbed = (launched - n_records) / 2;
  set.totals.escaped = launched - n_records - set.totals.absorbed;
  return set;
}

/// Unique scratch directory under the build tree, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(std::filesystem::temp_directory_path() / ("uqkd_test_" + name + "_" + std::to_string(::getpid()))) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& leaf) const { return path_ / leaf; }

 private:
  std::filesystem::path path_;
};

}  // namespace uqkd::testing
