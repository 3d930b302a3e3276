#include "uqkd/commands.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <chrono>
#include <fstream>
#include <sstream>

#include "uqkd/constants.hpp"
#include "uqkd/errors.hpp"

namespace uqkd {

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("{}: cannot open for writing", path.string()));
  out << text;
  out.close();
  if (!out) throw IoError(fmt::format("{}: write failed", path.string()));
}

void ensure_parent(const std::filesystem::path& path) {
  const auto parent = path.parent_path();
  if (parent.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(parent, ec);
  if (ec) throw IoError(fmt::format("{}: {}", parent.string(), ec.message()));
}

std::filesystem::path with_suffix(const std::filesystem::path& prefix, const std::string& suffix) {
  return std::filesystem::path(prefix.string() + suffix);
}

}  // namespace

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const ConfigError*>(&error)) return kExitConfig;
  if (dynamic_cast<const IoError*>(&error)) return kExitIo;
  if (dynamic_cast<const DomainError*>(&error) || dynamic_cast<const ConvergenceError*>(&error)) {
    return kExitNumerical;
  }
  return kExitFailure;
}

LinkConfig resolve_config(const CommonOptions& options, const std::string& fallback_text) {
  LinkConfig config = options.config_path ? load_config(*options.config_path) : parse_config(fallback_text);
  for (const auto& assignment : options.overrides) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError(assignment, "override must be key=value");
    auto key = assignment.substr(0, eq);
    auto value = assignment.substr(eq + 1);
    set_config_value(config, key, value);
  }
  if (options.seed) config.seed = *options.seed;
  if (options.photons) config.photons = *options.photons;
  if (options.workers) config.workers = *options.workers;
  if (options.level) config.quantile_level = *options.level;
  if (options.gate_grid) set_config_value(config, "analysis.gate_grid", *options.gate_grid);
  config.validate();
  return config;
}

SimulateResult cmd_simulate(const CommonOptions& options, const std::filesystem::path& out,
                            bool dry_run, std::ostream& log) {
  SimulateResult result{resolve_config(options), std::nullopt, 0.0};
  if (dry_run) {
    log << serialize_config(result.config);
    return result;
  }
  const auto start = std::chrono::steady_clock::now();
  result.arrivals = simulate(result.config);
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ensure_parent(out);
  persist(*result.arrivals, out);

  const auto& totals = result.arrivals->totals;
  const double rate = result.wall_seconds > 0.0 ? result.config.photons / result.wall_seconds : 0.0;
  fmt::print(log, "photons   {}\narrived   {}\nabsorbed  {}\nescaped   {}\n", result.config.photons,
             totals.arrived, totals.absorbed, totals.escaped);
  fmt::print(log, "weight    {:.6g}\nwall      {:.3f} s\nrate      {:.4g} photons/s\nwrote     {}\n",
             totals.arrived_weight, result.wall_seconds, rate, out.string());
  return result;
}

AnalyzeResult cmd_analyze(const CommonOptions& options, const std::filesystem::path& arrivals_path,
                          const std::filesystem::path& out, std::ostream& log) {
  const ArrivalSet arrivals = load(arrivals_path);
  const LinkConfig config = resolve_config(options, arrivals.header.config_text);
  if (arrivals.records.empty()) {
    throw DomainError(fmt::format("{}: arrival set is empty, nothing to analyze", arrivals_path.string()));
  }
  AnalyzeResult result;
  result.bit_period = select_bit_period(arrivals, config.quantile_level, config.quantile_weighting);
  result.fov = select_fov(arrivals, config.quantile_level, config.quantile_weighting);

  ensure_parent(out);
  result.delay_csv = with_suffix(out, "delay_cdf.csv");
  result.aoa_csv = with_suffix(out, "aoa_cdf.csv");
  write_cdf_csv(delay_cdf(arrivals, config.quantile_weighting), result.delay_csv);
  write_cdf_csv(aoa_cdf(arrivals, config.quantile_weighting), result.aoa_csv);

  fmt::print(log, "level       {} ({})\n", config.quantile_level, to_string(config.quantile_weighting));
  fmt::print(log, "bit period  {:.6g} ns (raw)  {:.6g} ns (rounded)\n", result.bit_period.raw * 1e9,
             result.bit_period.rounded * 1e9);
  fmt::print(log, "fov         {:.4f} deg (raw)  {:.0f} deg (rounded)\n", rad_to_deg(result.fov.raw),
             rad_to_deg(result.fov.rounded));
  fmt::print(log, "wrote       {}\nwrote       {}\n", result.delay_csv.string(), result.aoa_csv.string());
  return result;
}

void write_sweep_csv(const GateSweepResult& sweep, const std::filesystem::path& path) {
  std::string text = "gate_s,gamma,n_B,n_N,qber\n";
  for (const auto& p : sweep.points) {
    text += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", p.gate, p.gamma, p.background,
                        p.noise, p.qber);
  }
  write_text(path, text);
}

GateSweepResult cmd_optimize(const CommonOptions& options, const std::filesystem::path& arrivals_path,
                             const std::filesystem::path& out, std::ostream& log) {
  const ArrivalSet arrivals = load(arrivals_path);
  const LinkConfig config = resolve_config(options, arrivals.header.config_text);
  if (arrivals.records.empty() && !(config.bit_period_s && config.fov_deg)) {
    throw DomainError(fmt::format("{}: arrival set is empty; pin analysis.bit_period_s and "
                                  "analysis.fov_deg to sweep it",
                                  arrivals_path.string()));
  }
  const ChannelSelection selection = resolve_selection(config, arrivals);
  const auto grid = resolve_gate_grid(config, selection);
  GateSweepResult sweep = sweep_gate(arrivals, selection, config.sweep_context(), grid);
  ensure_parent(out);
  write_sweep_csv(sweep, out);

  const auto& best = sweep.points[sweep.optimal_index];
  fmt::print(log, "bit period    {:.6g} ns\nfov           {:.4f} deg\n", selection.bit_period * 1e9,
             rad_to_deg(selection.fov));
  fmt::print(log, "optimal gate  {:.6g} ps\nqber          {:.4e}\ngamma         {:.6g}\n",
             sweep.optimal_gate * 1e12, sweep.optimal_qber, best.gamma);
  fmt::print(log, "n_B           {:.4e}\nn_N           {:.4e}\nwrote         {}\n", best.background,
             best.noise, out.string());
  return sweep;
}

std::vector<MatrixEntry> load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("{}: cannot open matrix file", path.string()));
  std::vector<MatrixEntry> entries;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!header_seen) {
      header_seen = true;
      if (line.find("beam_radius_m") != std::string::npos) continue;
    }
    std::istringstream row(line);
    std::string a, b, c;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c)) {
      throw ConfigError(path.string(), fmt::format("line {}: expected three comma-separated values", line_no));
    }
    try {
      entries.push_back({std::stod(a), std::stod(b), std::stod(c)});
    } catch (const std::exception&) {
      throw ConfigError(path.string(), fmt::format("line {}: malformed number", line_no));
    }
  }
  return entries;
}

std::string format_table2(const std::vector<Table2Outcome>& outcomes) {
  std::string text = fmt::format("{:>8} {:>8} {:>6} {:>9} {:>6} {:>8} {:>10}\n", "r0(cm)", "theta0",
                                 "L(m)", "dt(ns)", "fov", "gate(ps)", "QBER");
  double last_r0 = -1.0;
  double last_theta = -1.0;
  for (const auto& o : outcomes) {
    if (o.entry.beam_radius_m != last_r0 || o.entry.divergence_deg != last_theta) {
      if (last_r0 >= 0.0) text += std::string(61, '-') + "\n";
      last_r0 = o.entry.beam_radius_m;
      last_theta = o.entry.divergence_deg;
    }
    const std::string lead = fmt::format("{:>8.3g} {:>7.3g}° {:>6.4g}", o.entry.beam_radius_m * 100,
                                         o.entry.divergence_deg, o.entry.link_distance_m);
    if (!o.row) {
      text += fmt::format("{} failed: {}\n", lead, o.error);
      continue;
    }
    const auto& sweep = o.row->sweep;
    text += fmt::format("{} {:>9.3g} {:>5.0f}° {:>8.4g} {:>10.3e}\n", lead, sweep.selection.bit_period * 1e9,
                        rad_to_deg(sweep.selection.fov), sweep.optimal_gate * 1e12, sweep.optimal_qber);
  }
  return text;
}

std::vector<Table2Outcome> cmd_table2(const CommonOptions& options,
                                      const std::filesystem::path& matrix_path,
                                      const std::filesystem::path& out_dir, std::ostream& log) {
  const LinkConfig base = resolve_config(options);
  const auto entries = load_matrix(matrix_path);
  const auto cache_dir = out_dir / "cache";
  std::error_code ec;
  std::filesystem::create_directories(cache_dir, ec);
  if (ec) throw IoError(fmt::format("{}: {}", cache_dir.string(), ec.message()));

  std::vector<Table2Outcome> outcomes;
  for (const auto& entry : entries) {
    Table2Outcome outcome;
    outcome.entry = entry;
    try {
      LinkConfig config = base;
      config.beam_radius_m = entry.beam_radius_m;
      config.divergence_deg = entry.divergence_deg;
      config.link_distance_m = entry.link_distance_m;
      config.validate();
      const auto cached = cache_dir / (campaign_hash(config) + ".uqkd");
      ArrivalSet arrivals;
      if (std::filesystem::exists(cached)) {
        arrivals = load(cached);
        outcome.cache_hit = true;
        fmt::print(log, "[cache hit] r0={} m theta={} deg L={} m ({})\n", entry.beam_radius_m,
                   entry.divergence_deg, entry.link_distance_m, cached.filename().string());
      } else {
        const auto start = std::chrono::steady_clock::now();
        arrivals = simulate(config);
        persist(arrivals, cached);
        fmt::print(log, "[simulated] r0={} m theta={} deg L={} m: {} arrivals in {:.1f} s\n",
                   entry.beam_radius_m, entry.divergence_deg, entry.link_distance_m,
                   arrivals.records.size(),
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
      }
      outcome.row = analyze_row(config, arrivals);
    } catch (const std::exception& e) {
      outcome.error = e.what();
      outcome.exit_code = exit_code_for(e);
      fmt::print(log, "[failed] r0={} m theta={} deg L={} m: {}\n", entry.beam_radius_m,
                 entry.divergence_deg, entry.link_distance_m, e.what());
    }
    outcomes.push_back(std::move(outcome));
  }

  std::string csv =
      "beam_radius_m,divergence_deg,link_distance_m,bit_period_raw_s,bit_period_s,fov_raw_rad,fov_rad,"
      "optimal_gate_s,optimal_qber,error\n";
  for (const auto& o : outcomes) {
    if (o.row) {
      const auto& r = *o.row;
      csv += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},\n",
                         o.entry.beam_radius_m, o.entry.divergence_deg, o.entry.link_distance_m,
                         r.bit_period.raw, r.sweep.selection.bit_period, r.fov.raw, r.sweep.selection.fov,
                         r.sweep.optimal_gate, r.sweep.optimal_qber);
    } else {
      std::string message = o.error;
      for (char& c : message) {
        if (c == ',' || c == '\n') c = ';';
      }
      csv += fmt::format("{:.17g},{:.17g},{:.17g},,,,,,,{}\n", o.entry.beam_radius_m, o.entry.divergence_deg,
                         o.entry.link_distance_m, message);
    }
  }
  const std::string table = format_table2(outcomes);
  write_text(out_dir / "table2.csv", csv);
  write_text(out_dir / "table2.txt", table);
  log << table;
  return outcomes;
}

}  // namespace uqkd
