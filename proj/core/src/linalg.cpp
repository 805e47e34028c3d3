#include "magnomech/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <fmt/format.h>

#include "magnomech/error.hpp"

namespace magnomech {

namespace {

using Mat36 = Eigen::Matrix<double, 36, 36>;
using Vec36 = Eigen::Matrix<double, 36, 1>;

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

void require_symmetric(const Eigen::MatrixXd& m, double tol, const char* who) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("{}: matrix is not square", who));
  }
  const double scale = std::max(max_abs(m), 1e-300);
  const double asym = max_abs(m - m.transpose());
  if (asym > tol * scale) {
    throw Error(ErrorCode::AsymmetricInput,
                fmt::format("{}: relative asymmetry {:.3g} exceeds {:.3g}", who,
                            asym / scale, tol));
  }
}

Mat6 lyapunov_rhs(const Mat6& f, const Mat6& g, const Mat6& d) {
  return f * g + g * f.transpose() + d;
}

Mat6 symmetrize(const Mat6& g) { return 0.5 * (g + g.transpose()); }

double spectral_radius(const Mat6& f) {
  Eigen::EigenSolver<Mat6> es(f, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::EigenFailure, "eigenvalue iteration failed on drift matrix");
  }
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

CovarianceMatrix::CovarianceMatrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() == 0 || m.rows() % 2 != 0) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("covariance matrix must be square with even nonzero dimension "
                            "(got {}x{})",
                            m.rows(), m.cols()));
  }
  if (!m.allFinite()) {
    throw Error(ErrorCode::NonFiniteState, "covariance matrix has non-finite entries");
  }
  m_ = 0.5 * (m + m.transpose());
}

CovarianceMatrix CovarianceMatrix::identity(int modes, double scale) {
  return CovarianceMatrix(scale * Eigen::MatrixXd::Identity(2 * modes, 2 * modes));
}

Eigen::MatrixXd symplectic_form(int modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

double stability_margin(const DriftMatrix& f) {
  if (!f.m.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "stability_margin: drift matrix is not finite");
  }
  Eigen::EigenSolver<Mat6> es(f.m, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::EigenFailure, "eigenvalue iteration failed on drift matrix");
  }
  return es.eigenvalues().real().maxCoeff();
}

double lyapunov_residual(const DriftMatrix& f, const DiffusionMatrix& d,
                         const CovarianceMatrix& gamma) {
  if (gamma.dim() != 6) {
    throw Error(ErrorCode::InvalidArgument, "lyapunov_residual: expected a 6x6 CM");
  }
  const Mat6 g = gamma.matrix();
  const Mat6 dm = d.dense();
  const double r = lyapunov_rhs(f.m, g, dm).norm();
  const double dn = dm.norm();
  return dn > 0.0 ? r / dn : r;
}

CovarianceMatrix solve_lyapunov_steady(const DriftMatrix& f, const DiffusionMatrix& d,
                                       const Tolerances& tol) {
  const double margin = stability_margin(f);
  if (!(margin < 0.0)) {
    throw Error(ErrorCode::UnstableDrift,
                fmt::format("drift matrix is not stable (margin {:.6g} rad/s)", margin));
  }

  // Column-major vec: vec(F G) = (I kron F) vec G, vec(G F^T) = (F kron I) vec G.
  Mat36 k = Mat36::Zero();
  for (int a = 0; a < 6; ++a) {
    for (int b = 0; b < 6; ++b) {
      for (int i = 0; i < 6; ++i) {
        k(6 * a + i, 6 * a + b) += f.m(i, b);
        k(6 * a + i, 6 * b + i) += f.m(a, b);
      }
    }
  }
  const Mat6 dm = d.dense();
  const Vec36 rhs = -Eigen::Map<const Vec36>(dm.data());

  Eigen::PartialPivLU<Mat36> lu(k);
  Vec36 x = lu.solve(rhs);
  if (!x.allFinite()) {
    throw Error(ErrorCode::SingularSystem, "Lyapunov system is numerically singular");
  }
  // A couple of refinement sweeps recover digits lost to the stiff
  // mechanical/optical rate ratio.
  for (int iter = 0; iter < 2; ++iter) {
    const Vec36 r = rhs - k * x;
    x += lu.solve(r);
  }

  Mat6 g = symmetrize(Eigen::Map<const Mat6>(x.data()));
  CovarianceMatrix out{Eigen::MatrixXd(g)};
  const double res = lyapunov_residual(f, d, out);
  if (!(res <= tol.lyapunov_residual)) {
    throw Error(ErrorCode::SingularSystem,
                fmt::format("Lyapunov residual {:.3g} exceeds tolerance {:.3g}", res,
                            tol.lyapunov_residual));
  }
  return out;
}

double default_step(const DriftMatrix& f, const EvolveOptions& opts) {
  const double rate = std::max(spectral_radius(f.m), opts.reference_rate);
  if (rate <= 0.0) return std::numeric_limits<double>::infinity();
  return opts.max_step_product / rate;
}

std::vector<CovarianceMatrix> evolve_cm(const DriftMatrix& f, const DiffusionMatrix& d,
                                        const CovarianceMatrix& gamma0,
                                        std::span<const double> t_grid,
                                        const EvolveOptions& opts) {
  if (gamma0.dim() != 6) {
    throw Error(ErrorCode::InvalidArgument, "evolve_cm: expected a 6x6 initial CM");
  }
  if (t_grid.empty() || t_grid.front() != 0.0) {
    throw Error(ErrorCode::InvalidArgument, "evolve_cm: time grid must start at 0");
  }
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1]) || !std::isfinite(t_grid[i])) {
      throw Error(ErrorCode::InvalidArgument, "evolve_cm: time grid must be strictly increasing");
    }
  }

  const double rate = std::max(spectral_radius(f.m), opts.reference_rate);
  double h_max = 0.0;
  if (opts.step) {
    const double h = *opts.step;
    if (!(h > 0.0) || !std::isfinite(h)) {
      throw Error(ErrorCode::InvalidArgument, "evolve_cm: step must be positive");
    }
    if (h * rate > 10.0 * opts.max_step_product) {
      throw Error(ErrorCode::StepTooLarge,
                  fmt::format("step {:.3g} s gives step*rate = {:.3g}, more than 10x the "
                              "bound {:.3g}",
                              h, h * rate, opts.max_step_product));
    }
    h_max = h;
  } else {
    h_max = rate > 0.0 ? opts.max_step_product / rate : std::numeric_limits<double>::infinity();
  }

  const Mat6& fm = f.m;
  const Mat6 dm = d.dense();
  Mat6 g = gamma0.matrix();

  std::vector<CovarianceMatrix> out;
  out.reserve(t_grid.size());
  out.emplace_back(Eigen::MatrixXd(g));

  for (std::size_t idx = 1; idx < t_grid.size(); ++idx) {
    const double span = t_grid[idx] - t_grid[idx - 1];
    const auto n = std::isfinite(h_max)
                       ? static_cast<long>(std::ceil(span / h_max * (1.0 - 1e-12)))
                       : 1L;
    const double h = span / static_cast<double>(std::max(n, 1L));
    for (long s = 0; s < std::max(n, 1L); ++s) {
      const Mat6 k1 = lyapunov_rhs(fm, g, dm);
      const Mat6 k2 = lyapunov_rhs(fm, g + 0.5 * h * k1, dm);
      const Mat6 k3 = lyapunov_rhs(fm, g + 0.5 * h * k2, dm);
      const Mat6 k4 = lyapunov_rhs(fm, g + h * k3, dm);
      g = symmetrize(g + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    }
    if (!g.allFinite()) {
      throw Error(ErrorCode::NonFiniteState,
                  fmt::format("covariance became non-finite before t = {:.6g} s", t_grid[idx]));
    }
    out.emplace_back(Eigen::MatrixXd(g));
  }
  return out;
}

std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& gamma, const Tolerances& tol) {
  const auto dim = gamma.rows();
  if (dim != gamma.cols() || dim % 2 != 0 || dim < 2 || dim > 6) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("symplectic_eigenvalues: expected 2n x 2n with n in 1..3 (got {}x{})",
                            gamma.rows(), gamma.cols()));
  }
  if (!gamma.allFinite()) {
    throw Error(ErrorCode::NonFiniteState, "symplectic_eigenvalues: non-finite input");
  }
  require_symmetric(gamma, tol.symmetry, "symplectic_eigenvalues");

  const int modes = static_cast<int>(dim / 2);
  const Eigen::MatrixXd m = symplectic_form(modes) * gamma;
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::EigenFailure, "eigenvalue iteration failed on Omega*gamma");
  }

  std::vector<double> moduli(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) moduli[static_cast<std::size_t>(i)] = std::abs(es.eigenvalues()(i));
  std::sort(moduli.begin(), moduli.end());

  std::vector<double> nu;
  nu.reserve(static_cast<std::size_t>(modes));
  for (std::size_t k = 0; k < moduli.size(); k += 2) {
    const double a = moduli[k];
    const double b = moduli[k + 1];
    if (std::abs(a - b) > tol.pairing * std::max({a, b, 1e-300})) {
      throw Error(ErrorCode::NonPairedSpectrum,
                  fmt::format("spectrum of Omega*gamma is not +/- paired ({:.12g} vs {:.12g})", a, b));
    }
    nu.push_back(0.5 * (a + b));
  }
  return nu;
}

}  // namespace magnomech
