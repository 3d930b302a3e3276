#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "uqkd/config.hpp"
#include "uqkd/pipeline.hpp"

namespace uqkd {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitIo = 3,
  kExitNumerical = 4,
};

/// Maps a caught exception onto the CLI exit code.
int exit_code_for(const std::exception& error);

/// Options shared by every subcommand; unset fields leave the config alone.
struct CommonOptions {
  std::optional<std::filesystem::path> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> photons;
  std::optional<unsigned> workers;
  std::optional<double> level;
  std::optional<std::string> gate_grid;
  std::vector<std::string> overrides;  // "key=value"
};

/// Loads the config (or `fallback_text`, or defaults) and applies overrides.
LinkConfig resolve_config(const CommonOptions& options, const std::string& fallback_text = {});

struct SimulateResult {
  LinkConfig config;
  std::optional<ArrivalSet> arrivals;  // empty for a dry run
  double wall_seconds = 0.0;
};

SimulateResult cmd_simulate(const CommonOptions& options, const std::filesystem::path& out,
                            bool dry_run, std::ostream& log);

struct AnalyzeResult {
  QuantileSelection bit_period;
  QuantileSelection fov;
  std::filesystem::path delay_csv;
  std::filesystem::path aoa_csv;
};

/// Writes `<out>delay_cdf.csv` and `<out>aoa_cdf.csv`; `out` is a path prefix.
AnalyzeResult cmd_analyze(const CommonOptions& options, const std::filesystem::path& arrivals_path,
                          const std::filesystem::path& out, std::ostream& log);

/// Writes the sweep CSV (gate_s,gamma,n_B,n_N,qber) to `out`.
GateSweepResult cmd_optimize(const CommonOptions& options, const std::filesystem::path& arrivals_path,
                             const std::filesystem::path& out, std::ostream& log);

void write_sweep_csv(const GateSweepResult& sweep, const std::filesystem::path& path);

/// One (r0, divergence, distance) combination of the table matrix.
struct MatrixEntry {
  double beam_radius_m = 0.0;
  double divergence_deg = 0.0;
  double link_distance_m = 0.0;
};

/// CSV with header `beam_radius_m,divergence_deg,link_distance_m`; `#` comments allowed.
std::vector<MatrixEntry> load_matrix(const std::filesystem::path& path);

struct Table2Outcome {
  MatrixEntry entry;
  std::optional<Table2Row> row;
  std::string error;
  int exit_code = kExitOk;
  bool cache_hit = false;
};

/// Runs every matrix entry, caching arrival sets under `<out_dir>/cache`, and
/// writes `<out_dir>/table2.txt` and `<out_dir>/table2.csv`.
std::vector<Table2Outcome> cmd_table2(const CommonOptions& options,
                                      const std::filesystem::path& matrix_path,
                                      const std::filesystem::path& out_dir, std::ostream& log);

std::string format_table2(const std::vector<Table2Outcome>& outcomes);

}  // namespace uqkd
