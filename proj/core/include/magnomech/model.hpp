#pragma once

// Linearized photon-magnon-phonon model with a coherent feedback loop on the
// cavity output. Everything is stored in SI / angular units (rad/s).

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace magnomech {

using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using cdouble = std::complex<double>;

/// How the magnomechanical coupling entering the drift matrix is obtained.
enum class CouplingMode {
  Direct,    ///< G_md supplied directly (as in all figure presets)
  Physical,  ///< G_md computed from the drive fields via the steady-state amplitudes
};

struct SystemParams {
  double omega_c = 0.0;      // cavity resonance, rad/s
  double omega_m = 0.0;      // magnon resonance, rad/s (sets the magnon bath occupation)
  double omega_d = 0.0;      // mechanical resonance, rad/s
  double delta_c = 0.0;      // bare cavity detuning omega_c - omega_0, rad/s
  double delta_m_eff = 0.0;  // effective magnon detuning, rad/s
  double kappa_c = 0.0;
  double kappa_m = 0.0;
  double gamma_d = 0.0;
  double g_mc = 0.0;

  CouplingMode coupling_mode = CouplingMode::Direct;
  double G_md = 0.0;         // direct mode: effective magnomechanical coupling, rad/s
  double g_md_bare = 0.0;    // physical mode: single-magnon coupling, rad/s
  double drive_field = 0.0;  // physical mode: magnon drive amplitude B0, tesla
  double sphere_diameter = 0.0;  // physical mode: YIG sphere diameter, m

  double tau = 0.0;    // beam-splitter reflectivity
  double theta = 0.0;  // feedback phase, rad
  double phi = 0.0;    // cavity drive phase, rad
  double omega_drive_amp = 0.0;  // cavity drive amplitude Omega, rad/s
  double temperature = 0.0;      // K, shared by all three baths

  /// Beam-splitter transmissivity sqrt(1 - tau^2).
  double mu() const;

  bool operator==(const SystemParams&) const = default;
};

/// Throws Error(RangeError) on an invariant violation. Returns human-readable
/// warnings for suspicious but admissible values (e.g. a low mechanical Q).
std::vector<std::string> validate(const SystemParams& p);

struct FeedbackParams {
  double kappa_fb = 0.0;
  double delta_fb = 0.0;
};

struct SteadyAmplitudes {
  cdouble m_s{};
  cdouble c_s{};
  double q_s = 0.0;
};

struct DerivedParams {
  double kappa_fb = 0.0;
  double delta_fb = 0.0;
  double n_c = 0.0;
  double n_m = 0.0;
  double n_d = 0.0;
  double rabi = 0.0;  // physical mode only
  cdouble m_s{};
  cdouble c_s{};
  double q_s = 0.0;
  double G_md_eff = 0.0;
};

/// Drift matrix in quadrature order (dQ, dP, dx, dy, dq, dp).
struct DriftMatrix {
  Mat6 m = Mat6::Zero();
};

/// Diagonal diffusion matrix; only the diagonal is stored.
struct DiffusionMatrix {
  Vec6 diag = Vec6::Zero();
  Mat6 dense() const { return diag.asDiagonal(); }
};

/// Bose-Einstein occupation [exp(hbar omega / kB T) - 1]^-1; exactly 0 at T = 0.
double thermal_occupation(double omega, double temperature);

FeedbackParams derive_feedback_params(const SystemParams& p);

/// Magnon drive Rabi frequency (sqrt(5)/4) gamma sqrt(N) B0 for a YIG sphere.
double rabi_frequency(double drive_field, double sphere_diameter);

/// Exact solution of the coupled steady-state amplitude equations.
SteadyAmplitudes steady_state_amplitudes(const SystemParams& p, double rabi);

/// Large-detuning approximation of m_s (kappa_c, kappa_m -> 0 limit of the
/// exact equations). Only meaningful when |Delta_m|, |Delta_fb| >> kappa.
cdouble approximate_magnon_amplitude(const SystemParams& p, double rabi);

/// |sqrt(2) g_md m_s|, the coupling magnitude entering the drift matrix.
double effective_coupling(const SystemParams& p, cdouble m_s);

DerivedParams derive(const SystemParams& p);

DriftMatrix build_drift(const SystemParams& p, const DerivedParams& d);
DiffusionMatrix build_diffusion(const SystemParams& p, const DerivedParams& d);

}  // namespace magnomech
