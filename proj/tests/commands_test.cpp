#include "uqkd/commands.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "uqkd/errors.hpp"

using namespace uqkd;
using uqkd::testing::TempDir;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

CommonOptions small_run(std::uint64_t photons = 20'000) {
  CommonOptions opts;
  opts.photons = photons;
  opts.seed = 42;
  return opts;
}

}  // namespace

TEST(Commands, ExitCodes) {
  EXPECT_EQ(exit_code_for(ConfigError("k", "bad")), kExitConfig);
  EXPECT_EQ(exit_code_for(IoError("x")), kExitIo);
  EXPECT_EQ(exit_code_for(IntegrityError("x")), kExitIo);
  EXPECT_EQ(exit_code_for(DomainError("x")), kExitNumerical);
  EXPECT_EQ(exit_code_for(ConvergenceError("x")), kExitNumerical);
  EXPECT_EQ(exit_code_for(std::runtime_error("x")), kExitFailure);
}

TEST(Commands, SimulateIsDeterministicAcrossWorkers) {
  TempDir dir("cmd_sim");
  std::ostringstream log;
  auto opts = small_run();
  opts.workers = 1;
  cmd_simulate(opts, dir / "a.uqkd", false, log);
  opts.workers = 4;
  cmd_simulate(opts, dir / "b.uqkd", false, log);
  EXPECT_EQ(slurp(dir / "a.uqkd"), slurp(dir / "b.uqkd"));
  EXPECT_NE(log.str().find("arrived"), std::string::npos);
  EXPECT_NE(log.str().find("photons/s"), std::string::npos);
}

TEST(Commands, DryRunPrintsConfigOnly) {
  TempDir dir("cmd_dry");
  std::ostringstream log;
  const auto result = cmd_simulate(small_run(), dir / "x.uqkd", true, log);
  EXPECT_FALSE(result.arrivals.has_value());
  EXPECT_FALSE(std::filesystem::exists(dir / "x.uqkd"));
  EXPECT_EQ(parse_config(log.str()), result.config);
}

TEST(Commands, InvalidConfigNamesConstraint) {
  TempDir dir("cmd_bad");
  {
    std::ofstream(dir / "bad.cfg") << "medium.scattering_per_m = 0.5\n";
  }
  CommonOptions opts = small_run();
  opts.config_path = dir / "bad.cfg";
  std::ostringstream log;
  try {
    cmd_simulate(opts, dir / "x.uqkd", false, log);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(exit_code_for(e), kExitConfig);
    EXPECT_NE(std::string(e.what()).find("medium.scattering_per_m"), std::string::npos);
  }
}

TEST(Commands, AnalyzeAndOptimize) {
  TempDir dir("cmd_analyze");
  std::ostringstream log;
  cmd_simulate(small_run(100'000), dir / "a.uqkd", false, log);

  const auto analysis = cmd_analyze({}, dir / "a.uqkd", dir / "run_", log);
  EXPECT_GT(analysis.bit_period.raw, 0.0);
  EXPECT_GE(analysis.bit_period.rounded, analysis.bit_period.raw);
  EXPECT_TRUE(slurp(analysis.delay_csv).starts_with("value,cdf\n"));
  EXPECT_TRUE(slurp(analysis.aoa_csv).starts_with("value,cdf\n"));

  CommonOptions median;
  median.level = 0.5;
  const auto half = cmd_analyze(median, dir / "a.uqkd", dir / "median_", log);
  EXPECT_LT(half.bit_period.raw, analysis.bit_period.raw);
  EXPECT_LT(half.fov.raw, analysis.fov.raw);

  const auto sweep = cmd_optimize({}, dir / "a.uqkd", dir / "sweep.csv", log);
  EXPECT_TRUE(slurp(dir / "sweep.csv").starts_with("gate_s,gamma,n_B,n_N,qber\n"));
  EXPECT_GT(sweep.optimal_qber, 0.0);

  CommonOptions single;
  single.gate_grid = "7e-12";
  EXPECT_EQ(cmd_optimize(single, dir / "a.uqkd", dir / "one.csv", log).optimal_gate, 7e-12);

  CommonOptions noiseless;
  noiseless.overrides = {"receiver.dark_count_rate_hz=0", "environment.surface_irradiance_w_m2=0"};
  EXPECT_EQ(cmd_optimize(noiseless, dir / "a.uqkd", dir / "quiet.csv", log).optimal_qber, 0.0);
}

TEST(Commands, AnalyzeEmptySetFails) {
  TempDir dir("cmd_empty");
  std::ostringstream log;
  auto opts = small_run(0);
  cmd_simulate(opts, dir / "e.uqkd", false, log);
  EXPECT_THROW(cmd_analyze({}, dir / "e.uqkd", dir / "e_", log), DomainError);
  EXPECT_THROW(cmd_analyze({}, dir / "missing.uqkd", dir / "e_", log), IoError);
}

TEST(Commands, Table2UsesCache) {
  TempDir dir("cmd_table2");
  {
    std::ofstream(dir / "matrix.csv") << "beam_radius_m,divergence_deg,link_distance_m\n0.003,20,10\n";
  }
  std::ostringstream first, second;
  const auto a = cmd_table2(small_run(50'000), dir / "matrix.csv", dir / "out", first);
  ASSERT_EQ(a.size(), 1u);
  ASSERT_TRUE(a[0].row.has_value()) << a[0].error;
  EXPECT_FALSE(a[0].cache_hit);
  const auto b = cmd_table2(small_run(50'000), dir / "matrix.csv", dir / "out", second);
  EXPECT_TRUE(b[0].cache_hit);
  EXPECT_NE(second.str().find("cache hit"), std::string::npos);
  EXPECT_EQ(a[0].row->sweep.optimal_gate, b[0].row->sweep.optimal_gate);
  EXPECT_EQ(a[0].row->sweep.optimal_qber, b[0].row->sweep.optimal_qber);
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "table2.txt"));
  EXPECT_TRUE(slurp(dir / "out" / "table2.csv").starts_with("beam_radius_m,divergence_deg,link_distance_m,"));
}

TEST(Commands, Table2ContinuesPastFailures) {
  TempDir dir("cmd_table2_fail");
  {
    std::ofstream(dir / "matrix.csv") << "0.003,95,10\n0.003,20,10\n";
  }
  std::ostringstream log;
  const auto outcomes = cmd_table2(small_run(20'000), dir / "matrix.csv", dir / "out", log);
  ASSERT_EQ(outcomes.size(), 2u);
  EXPECT_FALSE(outcomes[0].row.has_value());
  EXPECT_EQ(outcomes[0].exit_code, kExitConfig);
  EXPECT_TRUE(outcomes[1].row.has_value());
}
