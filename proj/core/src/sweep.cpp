#include "magnomech/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <thread>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "magnomech/constants.hpp"
#include "magnomech/error.hpp"

#ifndef MAGNOMECH_VERSION_STRING
#define MAGNOMECH_VERSION_STRING "0.0.0"
#endif

namespace magnomech {

using constants::angular;

std::string_view to_string(SweepParam p) {
  switch (p) {
    case SweepParam::DeltaC: return "delta_c";
    case SweepParam::DeltaM: return "delta_m_eff";
    case SweepParam::Tau: return "tau";
    case SweepParam::Theta: return "theta";
    case SweepParam::Temperature: return "temperature";
    case SweepParam::CouplingGmd: return "G_md";
  }
  return "?";
}

std::optional<SweepParam> sweep_param_from_string(std::string_view name) {
  for (auto p : {SweepParam::DeltaC, SweepParam::DeltaM, SweepParam::Tau, SweepParam::Theta,
                 SweepParam::Temperature, SweepParam::CouplingGmd}) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

SystemParams with_param(SystemParams base, SweepParam param, double value) {
  switch (param) {
    case SweepParam::DeltaC: base.delta_c = value; break;
    case SweepParam::DeltaM: base.delta_m_eff = value; break;
    case SweepParam::Tau: base.tau = value; break;
    case SweepParam::Theta: base.theta = value; break;
    case SweepParam::Temperature: base.temperature = value; break;
    case SweepParam::CouplingGmd: base.G_md = value; break;
  }
  return base;
}

double get_param(const SystemParams& p, SweepParam param) {
  switch (param) {
    case SweepParam::DeltaC: return p.delta_c;
    case SweepParam::DeltaM: return p.delta_m_eff;
    case SweepParam::Tau: return p.tau;
    case SweepParam::Theta: return p.theta;
    case SweepParam::Temperature: return p.temperature;
    case SweepParam::CouplingGmd: return p.G_md;
  }
  return 0.0;
}

double Axis::value(int i) const {
  if (i == count - 1) return max;
  return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
}

void validate(const Scenario& s) {
  validate(s.base);
  if (s.axes.size() > 2) {
    throw Error(ErrorCode::InvalidArgument, "a scenario supports at most two sweep axes");
  }
  for (std::size_t i = 0; i < s.axes.size(); ++i) {
    const auto& a = s.axes[i];
    if (!std::isfinite(a.min) || !std::isfinite(a.max)) {
      throw Error(ErrorCode::RangeError, fmt::format("axis {}: range must be finite", to_string(a.param)));
    }
    if (a.count < 2) {
      throw Error(ErrorCode::RangeError,
                  fmt::format("axis {}: count must be >= 2", to_string(a.param)));
    }
    if (a.max < a.min) {
      throw Error(ErrorCode::RangeError, fmt::format("axis {}: max < min", to_string(a.param)));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (s.axes[j].param == a.param) {
        throw Error(ErrorCode::InvalidArgument,
                    fmt::format("axis {} listed twice", to_string(a.param)));
      }
    }
    // Every value along the axis must itself give admissible parameters.
    validate(with_param(s.base, a.param, a.min));
    validate(with_param(s.base, a.param, a.max));
  }
  if (s.base.coupling_mode == CouplingMode::Physical) {
    for (const auto& a : s.axes) {
      if (a.param == SweepParam::CouplingGmd) {
        throw Error(ErrorCode::InvalidArgument, "G_md cannot be swept in physical coupling mode");
      }
    }
  }
  if (s.mode == RunMode::Dynamics) {
    const auto& d = s.dynamics;
    if (!(d.t_max > 0.0) || !(d.output_step > 0.0) || !std::isfinite(d.t_max) ||
        d.output_step > d.t_max) {
      throw Error(ErrorCode::RangeError,
                  "dynamics: need 0 < output_step <= t_max, both finite");
    }
    if (d.step && !(*d.step > 0.0)) {
      throw Error(ErrorCode::RangeError, "dynamics: forced step must be positive");
    }
  }
}

std::size_t grid_size(const Scenario& s) {
  std::size_t n = 1;
  for (const auto& a : s.axes) n *= static_cast<std::size_t>(a.count);
  return n;
}

std::string_view to_string(PointStatus s) {
  switch (s) {
    case PointStatus::Ok: return "ok";
    case PointStatus::Unstable: return "unstable";
    case PointStatus::Error: return "error";
  }
  return "?";
}

SteadyPoint evaluate_steady(const SystemParams& p, const Tolerances& tol) {
  SteadyPoint out;
  try {
    const auto derived = derive(p);
    out.drift = build_drift(p, derived);
    out.diffusion = build_diffusion(p, derived);
    out.stability_margin = stability_margin(out.drift);
    out.record.stability_margin = out.stability_margin;
    if (!(out.stability_margin < 0.0)) {
      out.status = PointStatus::Unstable;
      return out;
    }
    out.gamma = solve_lyapunov_steady(out.drift, out.diffusion, tol);
    out.lyapunov_residual = lyapunov_residual(out.drift, out.diffusion, *out.gamma);
    out.record = evaluate_entanglement(*out.gamma, out.stability_margin, tol);
  } catch (const Error& e) {
    out.status = e.code() == ErrorCode::UnstableDrift ? PointStatus::Unstable : PointStatus::Error;
    out.message = fmt::format("{}: {}", to_string(e.code()), e.what());
    out.gamma.reset();
  }
  return out;
}

std::size_t SweepResult::unstable_count() const {
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const auto& r) {
    return r.status == PointStatus::Unstable;
  }));
}

double SweepResult::unstable_fraction() const {
  return records.empty() ? 0.0
                         : static_cast<double>(unstable_count()) /
                               static_cast<double>(records.size());
}

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(now));
}

std::vector<int> unravel(const Scenario& s, std::size_t flat) {
  std::vector<int> idx(s.axes.size());
  for (std::size_t k = s.axes.size(); k-- > 0;) {
    const auto count = static_cast<std::size_t>(s.axes[k].count);
    idx[k] = static_cast<int>(flat % count);
    flat /= count;
  }
  return idx;
}

PointRecord evaluate_grid_point(const Scenario& s, std::size_t flat, const Tolerances& tol) {
  PointRecord rec;
  SystemParams p = s.base;
  const auto idx = unravel(s, flat);
  for (std::size_t k = 0; k < s.axes.size(); ++k) {
    const double v = s.axes[k].value(idx[k]);
    rec.axis_values.push_back(v);
    p = with_param(p, s.axes[k].param, v);
  }
  auto point = evaluate_steady(p, tol);
  rec.status = point.status;
  rec.message = std::move(point.message);
  rec.record = point.record;
  return rec;
}

}  // namespace

SweepResult run_steady_sweep(const Scenario& s, const SweepOptions& opts) {
  if (s.mode != RunMode::Steady) {
    throw Error(ErrorCode::InvalidArgument, "run_steady_sweep: scenario mode is not steady");
  }
  validate(s);

  SweepResult result;
  result.scenario = s;
  result.timestamp = utc_timestamp();
  result.code_version = code_version();

  const std::size_t n = grid_size(s);
  result.records.resize(n);

  const auto workers = static_cast<std::size_t>(std::max(1, opts.workers));
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) {
      result.records[i] = evaluate_grid_point(s, i, opts.tolerances);
    }
    return result;
  }

  // Points are independent; each worker writes only to its own slots.
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      result.records[i] = evaluate_grid_point(s, i, opts.tolerances);
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(std::min(workers, n));
  for (std::size_t w = 0; w < std::min(workers, n); ++w) pool.emplace_back(work);
  pool.clear();
  return result;
}

TemperatureScanResult run_temperature_scan(const Scenario& s, const SweepOptions& opts) {
  if (s.axes.size() != 1 || s.axes.front().param != SweepParam::Temperature) {
    throw Error(ErrorCode::InvalidArgument,
                "run_temperature_scan: scenario needs exactly one axis, over temperature");
  }
  TemperatureScanResult out;
  out.sweep = run_steady_sweep(s, opts);

  const auto& recs = out.sweep.records;
  auto value = [](const EntanglementRecord& r, int which) {
    return which == 0 ? r.e_om : which == 1 ? r.e_oM : r.e_mM;
  };
  for (int which = 0; which < 3; ++which) {
    std::optional<std::size_t> prev;       // last usable index
    std::optional<std::size_t> prev_prev;
    for (std::size_t i = 0; i < recs.size(); ++i) {
      if (recs[i].status != PointStatus::Ok) continue;
      const double e = value(recs[i].record, which);
      if (e == 0.0 && prev && value(recs[*prev].record, which) > 0.0) {
        const double t0 = recs[*prev].axis_values[0];
        const double t1 = recs[i].axis_values[0];
        const double e0 = value(recs[*prev].record, which);
        double t_cross = t1;
        // Extrapolate the last positive segment to its zero, kept inside [t0, t1].
        if (prev_prev) {
          const double tpp = recs[*prev_prev].axis_values[0];
          const double epp = value(recs[*prev_prev].record, which);
          if (epp > e0) t_cross = std::clamp(t0 + e0 * (t0 - tpp) / (epp - e0), t0, t1);
        }
        out.zero_crossing[static_cast<std::size_t>(which)] = t_cross;
        break;
      }
      prev_prev = prev;
      prev = i;
    }
  }
  return out;
}

DynamicsResult run_dynamics(const Scenario& s, const Tolerances& tol) {
  if (s.mode != RunMode::Dynamics) {
    throw Error(ErrorCode::InvalidArgument, "run_dynamics: scenario mode is not dynamics");
  }
  validate(s);

  DynamicsResult out;
  out.scenario = s;
  const auto& dyn = s.dynamics;

  const auto derived = derive(s.base);
  const auto f = build_drift(s.base, derived);
  const auto d = build_diffusion(s.base, derived);
  out.stability_margin = stability_margin(f);

  const auto steps = static_cast<long>(std::llround(dyn.t_max / dyn.output_step));
  out.times.reserve(static_cast<std::size_t>(steps) + 1);
  for (long i = 0; i <= steps; ++i) out.times.push_back(static_cast<double>(i) * dyn.output_step);

  const auto gamma0 = dyn.gamma0 == InitialState::UnitDiagonal ? CovarianceMatrix::identity(3)
                                                               : CovarianceMatrix::vacuum(3);
  EvolveOptions eo;
  eo.step = dyn.step;
  eo.reference_rate = s.base.omega_d;
  out.covariances = evolve_cm(f, d, gamma0, out.times, eo);

  out.records.reserve(out.covariances.size());
  for (const auto& g : out.covariances) {
    out.records.push_back(evaluate_entanglement(g, out.stability_margin, tol));
  }
  return out;
}

SystemParams baseline_params() {
  SystemParams p;
  p.omega_c = angular(10e9);
  p.omega_m = angular(10e9);
  p.omega_d = angular(10e6);
  p.gamma_d = angular(100.0);
  p.kappa_c = angular(1e6);
  p.kappa_m = angular(1e6);
  p.g_mc = angular(3.2e6);
  p.coupling_mode = CouplingMode::Direct;
  p.G_md = angular(3.2e6);
  p.delta_c = -angular(10e6);
  p.delta_m_eff = angular(9e6);
  p.tau = 0.1;
  p.theta = 0.0;
  p.temperature = 0.010;
  return p;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig2",  "fig3a", "fig3b", "fig3c",
                                              "fig4a", "fig4b", "fig5"};
  return names;
}

Scenario make_preset(std::string_view name) {
  Scenario s;
  s.name = std::string(name);
  s.base = baseline_params();

  const Axis delta_c_axis{SweepParam::DeltaC, -angular(20e6), 0.0, 201};
  const Axis tau_axis{SweepParam::Tau, 0.0, 0.5, 201};

  if (name == "fig2") {
    s.axes = {Axis{SweepParam::DeltaC, -angular(20e6), 0.0, 101},
              Axis{SweepParam::DeltaM, 0.0, angular(20e6), 101}};
    return s;
  }

  s.base.G_md = angular(4.8e6);
  if (name == "fig3a") {
    s.axes = {delta_c_axis};
  } else if (name == "fig3b") {
    s.axes = {Axis{SweepParam::Temperature, 0.0, 0.4, 201}};
  } else if (name == "fig3c") {
    s.axes = {tau_axis};
  } else if (name == "fig4a") {
    s.axes = {delta_c_axis};
  } else if (name == "fig4b") {
    s.base.tau = 0.2;
    s.axes = {Axis{SweepParam::Temperature, 0.0, 0.15, 4},
              Axis{SweepParam::Tau, 0.0, 0.5, 101}};
  } else if (name == "fig5") {
    s.mode = RunMode::Dynamics;
    s.dynamics = DynamicsSettings{};
  } else {
    throw Error(ErrorCode::UnknownPreset, fmt::format("unknown preset '{}'", name));
  }
  return s;
}

std::string code_version() { return MAGNOMECH_VERSION_STRING; }

}  // namespace magnomech
