// Command-line front end: simulate, analyze, optimize, table2.

#include <CLI11.hpp>

#include <iostream>

#include "uqkd/commands.hpp"
#include "uqkd/errors.hpp"

namespace {

void add_common(CLI::App* cmd, uqkd::CommonOptions& opts, bool analysis_flags) {
  cmd->add_option_function<std::string>("--config", [&opts](const std::string& p) { opts.config_path = p; },
                                        "Config file (key = value lines)");
  cmd->add_option_function<std::uint64_t>("--seed", [&opts](std::uint64_t v) { opts.seed = v; }, "RNG seed");
  cmd->add_option_function<std::uint64_t>("--photons", [&opts](std::uint64_t v) { opts.photons = v; },
                                          "Photons to launch");
  cmd->add_option_function<unsigned>("--workers", [&opts](unsigned v) { opts.workers = v; },
                                     "Worker threads")
      ->check(CLI::Range(1u, 1024u));
  if (analysis_flags) {
    cmd->add_option_function<double>("--level", [&opts](double v) { opts.level = v; },
                                     "Quantile level for bit period / FoV selection");
    cmd->add_option_function<std::string>("--gate-grid", [&opts](const std::string& v) { opts.gate_grid = v; },
                                          "Gate times in seconds: a,b,c or start:step:stop");
  }
  cmd->add_option("--set", opts.overrides, "Config override key=value (repeatable)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Underwater QKD link simulator: photon transport, channel selection, gate optimization"};
  app.require_subcommand(1);

  uqkd::CommonOptions opts;
  std::string out;
  std::string input;
  bool dry_run = false;

  auto* simulate = app.add_subcommand("simulate", "Run a photon transport campaign and store the arrivals");
  add_common(simulate, opts, false);
  simulate->add_option("--out", out, "Arrival file to write")->default_val("arrivals.uqkd");
  simulate->add_flag("--dry-run", dry_run, "Print the resolved config and exit");

  auto* analyze = app.add_subcommand("analyze", "Select bit period and FoV from stored arrivals");
  analyze->add_option("arrivals", input, "Arrival file")->required();
  add_common(analyze, opts, true);
  analyze->add_option("--out", out, "Prefix for the CDF CSV files")->default_val("");

  auto* optimize = app.add_subcommand("optimize", "Sweep the SPAD gate time and report the QBER minimum");
  optimize->add_option("arrivals", input, "Arrival file")->required();
  add_common(optimize, opts, true);
  optimize->add_option("--out", out, "Sweep CSV to write")->default_val("gate_sweep.csv");

  auto* table2 = app.add_subcommand("table2", "Run the pipeline over a matrix of (r0, divergence, L)");
  table2->add_option("matrix", input, "Matrix CSV: beam_radius_m,divergence_deg,link_distance_m")->required();
  add_common(table2, opts, true);
  table2->add_option("--out", out, "Output directory (cache/ and table2.{txt,csv})")->default_val("table2_out");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      uqkd::cmd_simulate(opts, out, dry_run, std::cout);
    } else if (analyze->parsed()) {
      uqkd::cmd_analyze(opts, input, out, std::cout);
    } else if (optimize->parsed()) {
      uqkd::cmd_optimize(opts, input, out, std::cout);
    } else if (table2->parsed()) {
      const auto outcomes = uqkd::cmd_table2(opts, input, out, std::cout);
      for (const auto& o : outcomes) {
        if (o.exit_code != uqkd::kExitOk) return o.exit_code;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return uqkd::exit_code_for(e);
  }
  return uqkd::kExitOk;
}
