#include "magnomech/model.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "magnomech/constants.hpp"
#include "magnomech/error.hpp"

namespace magnomech {

namespace {

void require(bool ok, ErrorCode code, const std::string& msg) {
  if (!ok) throw Error(code, msg);
}

void require_finite(double v, const char* name) {
  require(std::isfinite(v), ErrorCode::RangeError, fmt::format("{} must be finite", name));
}

void require_non_negative(double v, const char* name) {
  require_finite(v, name);
  require(v >= 0.0, ErrorCode::RangeError, fmt::format("{} must be >= 0 (got {})", name, v));
}

void require_positive(double v, const char* name) {
  require_finite(v, name);
  require(v > 0.0, ErrorCode::RangeError, fmt::format("{} must be > 0 (got {})", name, v));
}

}  // namespace

double SystemParams::mu() const { return std::sqrt(1.0 - tau * tau); }

std::vector<std::string> validate(const SystemParams& p) {
  require_positive(p.omega_c, "omega_c");
  require_positive(p.omega_m, "omega_m");
  require_positive(p.omega_d, "omega_d");
  require_finite(p.delta_c, "delta_c");
  require_finite(p.delta_m_eff, "delta_m_eff");
  require_non_negative(p.kappa_c, "kappa_c");
  require_non_negative(p.kappa_m, "kappa_m");
  require_non_negative(p.gamma_d, "gamma_d");
  require_finite(p.g_mc, "g_mc");
  require_finite(p.tau, "tau");
  require(p.tau >= 0.0 && p.tau <= 1.0, ErrorCode::RangeError,
          fmt::format("tau must lie in [0, 1] (got {})", p.tau));
  require_finite(p.theta, "theta");
  require_finite(p.phi, "phi");
  require_finite(p.omega_drive_amp, "omega_drive_amp");
  require_non_negative(p.temperature, "temperature");

  if (p.coupling_mode == CouplingMode::Direct) {
    require_finite(p.G_md, "G_md");
  } else {
    require_finite(p.g_md_bare, "g_md_bare");
    require_non_negative(p.drive_field, "drive_field");
    require_positive(p.sphere_diameter, "sphere_diameter");
  }

  std::vector<std::string> warnings;
  if (p.gamma_d > 0.0 && p.omega_d / p.gamma_d < 1.0e3) {
    warnings.push_back(fmt::format(
        "mechanical quality factor omega_d/gamma_d = {:.3g} is below 1e3; "
        "the Markovian mechanical bath is questionable",
        p.omega_d / p.gamma_d));
  }
  return warnings;
}

double thermal_occupation(double omega, double temperature) {
  if (!std::isfinite(omega) || !std::isfinite(temperature)) {
    throw Error(ErrorCode::InvalidArgument, "thermal_occupation: non-finite input");
  }
  if (omega <= 0.0 || temperature < 0.0) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("thermal_occupation: need omega > 0 and T >= 0 (got {}, {})",
                            omega, temperature));
  }
  if (temperature == 0.0) return 0.0;
  const double x = constants::hbar * omega / (constants::boltzmann * temperature);
  return 1.0 / std::expm1(x);
}

FeedbackParams derive_feedback_params(const SystemParams& p) {
  return {
      p.kappa_c * (1.0 - 2.0 * p.tau * std::cos(p.theta)),
      p.delta_c + 2.0 * p.kappa_c * p.tau * std::sin(p.theta),
  };
}

double rabi_frequency(double drive_field, double sphere_diameter) {
  if (!std::isfinite(drive_field) || !std::isfinite(sphere_diameter)) {
    throw Error(ErrorCode::InvalidArgument, "rabi_frequency: non-finite input");
  }
  if (drive_field < 0.0 || sphere_diameter <= 0.0) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("rabi_frequency: need B0 >= 0 and diameter > 0 (got {}, {})",
                            drive_field, sphere_diameter));
  }
  const double radius = 0.5 * sphere_diameter;
  const double volume = 4.0 / 3.0 * std::numbers::pi * radius * radius * radius;
  const double spins = constants::yig_spin_density * volume;
  return std::sqrt(5.0) / 4.0 * constants::gyromagnetic_ratio * std::sqrt(spins) * drive_field;
}

SteadyAmplitudes steady_state_amplitudes(const SystemParams& p, double rabi) {
  const auto fb = derive_feedback_params(p);
  const cdouble i{0.0, 1.0};

  // [ iDm + km   i g      ] [m]   [ E                 ]
  // [ i g        iDfb+kfb ] [c] = [ -i mu Omega e^iphi ]
  const cdouble a11 = i * p.delta_m_eff + p.kappa_m;
  const cdouble a12 = i * p.g_mc;
  const cdouble a21 = a12;
  const cdouble a22 = i * fb.delta_fb + fb.kappa_fb;
  const cdouble b1 = rabi;
  const cdouble b2 = -i * p.mu() * p.omega_drive_amp * std::polar(1.0, p.phi);

  const cdouble det = a11 * a22 - a12 * a21;
  const double scale = std::abs(a11 * a22) + std::abs(a12 * a21);
  if (!(std::abs(det) > 1e-14 * scale) || scale == 0.0) {
    throw Error(ErrorCode::DegenerateParameters,
                "steady-state amplitude equations are singular for these parameters");
  }

  SteadyAmplitudes out;
  out.m_s = (b1 * a22 - a12 * b2) / det;
  out.c_s = (a11 * b2 - a21 * b1) / det;
  out.q_s = -(p.g_md_bare / p.omega_d) * std::norm(out.m_s);
  return out;
}

cdouble approximate_magnon_amplitude(const SystemParams& p, double rabi) {
  const auto fb = derive_feedback_params(p);
  const cdouble i{0.0, 1.0};
  const cdouble drive = p.mu() * p.omega_drive_amp * std::polar(1.0, p.phi);
  const double denom = p.g_mc * p.g_mc - p.delta_m_eff * fb.delta_fb;
  if (denom == 0.0) {
    throw Error(ErrorCode::DegenerateParameters,
                "approximate amplitude undefined: g_mc^2 == Delta_m Delta_fb");
  }
  return (i * rabi * fb.delta_fb - p.g_mc * drive) / denom;
}

double effective_coupling(const SystemParams& p, cdouble m_s) {
  return std::abs(std::sqrt(2.0) * p.g_md_bare * m_s);
}

DerivedParams derive(const SystemParams& p) {
  DerivedParams d;
  const auto fb = derive_feedback_params(p);
  d.kappa_fb = fb.kappa_fb;
  d.delta_fb = fb.delta_fb;
  d.n_c = thermal_occupation(p.omega_c, p.temperature);
  d.n_m = thermal_occupation(p.omega_m, p.temperature);
  d.n_d = thermal_occupation(p.omega_d, p.temperature);

  if (p.coupling_mode == CouplingMode::Direct) {
    d.G_md_eff = p.G_md;
  } else {
    d.rabi = rabi_frequency(p.drive_field, p.sphere_diameter);
    const auto amp = steady_state_amplitudes(p, d.rabi);
    d.m_s = amp.m_s;
    d.c_s = amp.c_s;
    d.q_s = amp.q_s;
    d.G_md_eff = effective_coupling(p, amp.m_s);
  }
  return d;
}

DriftMatrix build_drift(const SystemParams& p, const DerivedParams& d) {
  DriftMatrix f;
  auto& m = f.m;
  const double kfb = d.kappa_fb;
  const double dfb = d.delta_fb;
  const double g = p.g_mc;
  const double dm = p.delta_m_eff;
  const double G = d.G_md_eff;

  m(0, 0) = -kfb; m(0, 1) = dfb;  m(0, 3) = g;
  m(1, 0) = -dfb; m(1, 1) = -kfb; m(1, 2) = -g;
  m(2, 1) = g;    m(2, 2) = -p.kappa_m; m(2, 3) = dm; m(2, 4) = -G;
  m(3, 0) = -g;   m(3, 2) = -dm;  m(3, 3) = -p.kappa_m;
  m(4, 5) = p.omega_d;
  m(5, 3) = G;    m(5, 4) = -p.omega_d; m(5, 5) = -p.gamma_d;
  return f;
}

DiffusionMatrix build_diffusion(const SystemParams& p, const DerivedParams& d) {
  // |1 - tau e^{i theta}|^2, which is (1 - tau)^2 at theta = 0.
  const double loop = 1.0 - 2.0 * p.tau * std::cos(p.theta) + p.tau * p.tau;
  const double mu2 = 1.0 - p.tau * p.tau;
  const double cavity = p.kappa_c * mu2 * loop * (2.0 * d.n_c + 1.0);
  const double magnon = p.kappa_m * (2.0 * d.n_m + 1.0);

  DiffusionMatrix out;
  out.diag << cavity, cavity, magnon, magnon, 0.0, p.gamma_d * (2.0 * d.n_d + 1.0);
  return out;
}

}  // namespace magnomech
