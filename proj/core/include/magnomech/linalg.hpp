#pragma once

// Small dense kernels for Gaussian covariance dynamics: steady-state Lyapunov
// solve, fixed-step RK4 evolution, drift stability and symplectic spectra.

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "magnomech/model.hpp"

namespace magnomech {

/// Numerical tolerances shared by the linear-algebra kernels.
struct Tolerances {
  double symmetry = 1e-12;        // relative asymmetry accepted on input CMs
  double pairing = 1e-9;          // relative mismatch of +/- nu pairs
  double lyapunov_residual = 1e-10;
};

/// Real symmetric 2n x 2n covariance matrix of n modes, quadratures ordered
/// (q1, p1, q2, p2, ...). Construction symmetrizes the input.
class CovarianceMatrix {
public:
  CovarianceMatrix() = default;
  explicit CovarianceMatrix(const Eigen::MatrixXd& m);

  static CovarianceMatrix identity(int modes, double scale = 1.0);
  static CovarianceMatrix vacuum(int modes) { return identity(modes, 0.5); }

  const Eigen::MatrixXd& matrix() const { return m_; }
  int modes() const { return static_cast<int>(m_.rows() / 2); }
  int dim() const { return static_cast<int>(m_.rows()); }
  double operator()(int r, int c) const { return m_(r, c); }

  bool operator==(const CovarianceMatrix& o) const {
    return m_.rows() == o.m_.rows() && m_ == o.m_;
  }

private:
  Eigen::MatrixXd m_;
};

/// Block-diagonal symplectic form with n blocks [[0, 1], [-1, 0]].
Eigen::MatrixXd symplectic_form(int modes);

/// max Re(lambda) over the spectrum of F; negative means stable.
double stability_margin(const DriftMatrix& f);

/// ||F G + G F^T + D||_F / ||D||_F (absolute norm when D = 0).
double lyapunov_residual(const DriftMatrix& f, const DiffusionMatrix& d,
                         const CovarianceMatrix& gamma);

/// Solves F G + G F^T + D = 0 through the vectorized 36 x 36 system.
/// Throws UnstableDrift when the margin is >= 0 and SingularSystem when the
/// solve fails or misses the residual tolerance.
CovarianceMatrix solve_lyapunov_steady(const DriftMatrix& f, const DiffusionMatrix& d,
                                       const Tolerances& tol = {});

struct EvolveOptions {
  /// Fixed RK4 step in seconds. When unset, the step is chosen from the
  /// default bound step * rate <= max_step_product.
  std::optional<double> step;
  /// Extra rate (rad/s) included in the step bound next to max |eig(F)|;
  /// the mechanical frequency in practice.
  double reference_rate = 0.0;
  double max_step_product = 0.05;
};

/// RK4 integration of dG/dt = F G + G F^T + D from gamma0 at t = 0, with
/// re-symmetrization after every step. Returns G at each time in t_grid.
std::vector<CovarianceMatrix> evolve_cm(const DriftMatrix& f, const DiffusionMatrix& d,
                                        const CovarianceMatrix& gamma0,
                                        std::span<const double> t_grid,
                                        const EvolveOptions& opts = {});

/// Step actually used by evolve_cm when no step is forced.
double default_step(const DriftMatrix& f, const EvolveOptions& opts = {});

/// Symplectic eigenvalues nu_k (ascending) of a 2n x 2n CM, n in {1, 2, 3},
/// from the moduli of the eigenvalues of Omega * gamma.
std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& gamma,
                                           const Tolerances& tol = {});
inline std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& gamma,
                                                  const Tolerances& tol = {}) {
  return symplectic_eigenvalues(gamma.matrix(), tol);
}

}  // namespace magnomech
