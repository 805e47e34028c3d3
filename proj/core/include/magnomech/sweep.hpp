#pragma once

// Parameter-grid and time-grid drivers over the model -> linalg ->
// entanglement pipeline, plus the named figure presets.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "magnomech/entanglement.hpp"
#include "magnomech/linalg.hpp"
#include "magnomech/model.hpp"

namespace magnomech {

enum class SweepParam { DeltaC, DeltaM, Tau, Theta, Temperature, CouplingGmd };

std::string_view to_string(SweepParam p);
std::optional<SweepParam> sweep_param_from_string(std::string_view name);

/// Returns a copy of `base` with `param` set to `value` (SI / rad/s units).
SystemParams with_param(SystemParams base, SweepParam param, double value);
double get_param(const SystemParams& p, SweepParam param);

struct Axis {
  SweepParam param = SweepParam::DeltaC;
  double min = 0.0;
  double max = 0.0;
  int count = 2;

  double value(int i) const;
  bool operator==(const Axis&) const = default;
};

enum class RunMode { Steady, Dynamics };

/// Initial CM for dynamics runs: diag(1,...,1) or the vacuum diag(1/2,...).
enum class InitialState { UnitDiagonal, Vacuum };

struct DynamicsSettings {
  double t_max = 3e-6;         // s
  double output_step = 1e-9;   // s
  std::optional<double> step;  // forced RK4 step, s
  InitialState gamma0 = InitialState::UnitDiagonal;

  bool operator==(const DynamicsSettings&) const = default;
};

struct Scenario {
  std::string name;
  SystemParams base;
  std::vector<Axis> axes;  // at most two; first axis is the outer loop
  RunMode mode = RunMode::Steady;
  DynamicsSettings dynamics;

  bool operator==(const Scenario&) const = default;
};

/// Throws Error(RangeError / InvalidArgument) when the scenario is malformed.
void validate(const Scenario& s);

std::size_t grid_size(const Scenario& s);

enum class PointStatus { Ok, Unstable, Error };
std::string_view to_string(PointStatus s);

/// Full steady-state evaluation at one parameter point.
struct SteadyPoint {
  PointStatus status = PointStatus::Ok;
  std::string message;
  DriftMatrix drift;
  DiffusionMatrix diffusion;
  double stability_margin = 0.0;
  std::optional<CovarianceMatrix> gamma;  // stable points only
  double lyapunov_residual = 0.0;
  EntanglementRecord record;
};

SteadyPoint evaluate_steady(const SystemParams& p, const Tolerances& tol = {});

struct PointRecord {
  std::vector<double> axis_values;
  PointStatus status = PointStatus::Ok;
  std::string message;
  EntanglementRecord record;  // values meaningful only when status == Ok
};

struct SweepResult {
  Scenario scenario;
  std::vector<PointRecord> records;  // grid order
  std::string timestamp;             // ISO-8601 UTC, not written to output files
  std::string code_version;

  std::size_t unstable_count() const;
  double unstable_fraction() const;
};

struct SweepOptions {
  int workers = 1;
  Tolerances tolerances;
};

SweepResult run_steady_sweep(const Scenario& s, const SweepOptions& opts = {});

struct TemperatureScanResult {
  SweepResult sweep;
  /// First temperature (K) at which each bipartite negativity reaches zero after
  /// being positive, linearly interpolated; order E_om, E_oM, E_mM.
  std::array<std::optional<double>, 3> zero_crossing;
};

/// Requires exactly one axis, over temperature.
TemperatureScanResult run_temperature_scan(const Scenario& s, const SweepOptions& opts = {});

struct DynamicsResult {
  Scenario scenario;
  std::vector<double> times;
  std::vector<EntanglementRecord> records;
  std::vector<CovarianceMatrix> covariances;
  double stability_margin = 0.0;
};

DynamicsResult run_dynamics(const Scenario& s, const Tolerances& tol = {});

/// The common parameter baseline shared by all presets (T = 10 mK).
SystemParams baseline_params();

const std::vector<std::string>& preset_names();
Scenario make_preset(std::string_view name);

std::string code_version();

}  // namespace magnomech
