// magnomech: steady-state, sweep and dynamics runs of the feedback-coupled
// cavity magnomechanical system.
//
// Exit codes: 0 success, 2 configuration error, 3 runtime error.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "magnomech/error.hpp"
#include "magnomech/records_io.hpp"
#include "magnomech/scenario_io.hpp"
#include "magnomech/sweep.hpp"

namespace {

using namespace magnomech;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct RunConfig {
  std::string preset;
  std::string scenario_file;
  std::string out = "-";
  std::string format = "csv";
  int workers = 1;
  std::vector<std::string> overrides;
};

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

int default_workers() {
  if (const char* env = std::getenv("MAGNOMECH_WORKERS"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const int n = std::stoi(env, &used);
      if (used == std::string(env).size() && n >= 1) return n;
    } catch (const std::exception&) {
    }
    throw ConfigError(fmt::format("MAGNOMECH_WORKERS must be a positive integer (got '{}')", env));
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void add_run_options(CLI::App& cmd, RunConfig& cfg) {
  auto* preset = cmd.add_option("--preset", cfg.preset, "Named preset (see `presets`)");
  auto* file = cmd.add_option("--scenario", cfg.scenario_file, "Scenario file");
  preset->excludes(file);
  file->excludes(preset);
  cmd.add_option("--out", cfg.out, "Output path, '-' for stdout")->capture_default_str();
  cmd.add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"csv", "ndjson"}))
      ->capture_default_str();
  cmd.add_option("--workers", cfg.workers, "Worker threads (default: $MAGNOMECH_WORKERS)")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--set", cfg.overrides, "Override key=value (repeatable)")
      ->allow_extra_args(false)
      ->take_all();
}

Scenario load(const RunConfig& cfg) {
  if (cfg.preset.empty() == cfg.scenario_file.empty()) {
    throw ConfigError("exactly one of --preset or --scenario is required");
  }
  try {
    Scenario s =
        cfg.preset.empty() ? parse_scenario_file(cfg.scenario_file) : load_preset(cfg.preset);
    for (const auto& o : cfg.overrides) apply_override(s, o);
    return s;
  } catch (const Error& e) {
    // Unreadable scenario files count as configuration errors too.
    throw ConfigError(e.what());
  }
}

OutputFormat output_format(const RunConfig& cfg) {
  return cfg.format == "ndjson" ? OutputFormat::Ndjson : OutputFormat::Csv;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void print_warnings(const Scenario& s) {
  for (const auto& w : validate(s.base)) std::cerr << "warning: " << w << '\n';
}

int run_steady(const RunConfig& cfg, bool require_axes) {
  const auto t0 = std::chrono::steady_clock::now();
  Scenario s = load(cfg);
  s.mode = RunMode::Steady;
  validate(s);
  if (require_axes && s.axes.empty()) throw ConfigError("sweep needs at least one [axis]");
  print_warnings(s);

  SweepOptions opts;
  opts.workers = cfg.workers;

  SweepResult result;
  std::optional<TemperatureScanResult> scan;
  if (require_axes && s.axes.size() == 1 && s.axes.front().param == SweepParam::Temperature) {
    scan = run_temperature_scan(s, opts);
    result = scan->sweep;
  } else {
    result = run_steady_sweep(s, opts);
  }

  const auto fmt_kind = output_format(cfg);
  if (cfg.out == "-") {
    write_records(std::cout, result, fmt_kind);
  } else {
    write_records(std::filesystem::path(cfg.out), result, fmt_kind);
  }

  const auto errors = static_cast<std::size_t>(std::count_if(
      result.records.begin(), result.records.end(),
      [](const PointRecord& r) { return r.status == PointStatus::Error; }));
  std::cerr << fmt::format("{}: {} points computed, {} unstable, {} errors, {:.3f} s wall\n",
                           s.name.empty() ? "scenario" : s.name, result.records.size(),
                           result.unstable_count(), errors, seconds_since(t0));
  if (scan) {
    static constexpr std::array<const char*, 3> labels{"E_om", "E_oM", "E_mM"};
    for (std::size_t i = 0; i < 3; ++i) {
      const auto& z = scan->zero_crossing[i];
      std::cerr << fmt::format("  {} vanishes at T = {}\n", labels[i],
                               z ? fmt::format("{:.4g} K", *z) : std::string("(not reached)"));
    }
  }
  return kExitOk;
}

int run_dynamics_cmd(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  Scenario s = load(cfg);
  s.mode = RunMode::Dynamics;
  if (!s.axes.empty()) {
    std::cerr << "note: dynamics runs at the base parameters; sweep axes are ignored\n";
    s.axes.clear();
  }
  validate(s);
  print_warnings(s);

  const auto result = run_dynamics(s);
  const auto fmt_kind = output_format(cfg);
  if (cfg.out == "-") {
    write_dynamics(std::cout, result, fmt_kind);
  } else {
    write_dynamics(std::filesystem::path(cfg.out), result, fmt_kind);
  }
  std::cerr << fmt::format("{}: {} points computed, {} unstable, {:.3f} s wall\n",
                           s.name.empty() ? "scenario" : s.name, result.records.size(),
                           result.stability_margin < 0.0 ? 0 : 1, seconds_since(t0));
  return kExitOk;
}

int run_presets(const std::string& dump, const std::string& out) {
  if (dump.empty()) {
    for (const auto& name : preset_names()) {
      const auto s = make_preset(name);
      std::cout << fmt::format("{:<6} {:<8} axes:", name,
                               s.mode == RunMode::Steady ? "steady" : "dynamics");
      if (s.axes.empty()) std::cout << " (none)";
      for (const auto& a : s.axes) std::cout << ' ' << to_string(a.param) << '[' << a.count << ']';
      std::cout << '\n';
    }
    return kExitOk;
  }
  const auto text = serialize_scenario(make_preset(dump));
  if (out == "-") {
    std::cout << text;
  } else {
    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    if (!f || !(f << text)) {
      throw Error(ErrorCode::IoError, fmt::format("cannot write '{}'", out));
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian entanglement in a cavity magnomechanical system with coherent feedback"};
  app.require_subcommand(1);

  RunConfig cfg;
  auto* steady = app.add_subcommand("steady", "Steady-state entanglement over the scenario grid");
  auto* sweep = app.add_subcommand("sweep", "Parameter sweep (temperature scans report zero crossings)");
  auto* dynamics = app.add_subcommand("dynamics", "Time evolution of the covariance matrix");
  for (auto* cmd : {steady, sweep, dynamics}) add_run_options(*cmd, cfg);

  std::string dump;
  std::string dump_out = "-";
  auto* presets = app.add_subcommand("presets", "List presets or export one as a scenario file");
  presets->add_option("--dump", dump, "Preset to print as a scenario file");
  presets->add_option("--out", dump_out, "Where to write the dumped scenario");

  try {
    cfg.workers = default_workers();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitConfig;
  }

  try {
    if (*steady) return run_steady(cfg, false);
    if (*sweep) return run_steady(cfg, true);
    if (*dynamics) return run_dynamics_cmd(cfg);
    if (*presets) return run_presets(dump, dump_out);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_config_error(e.code()) ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
