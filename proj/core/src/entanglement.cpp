#include "magnomech/entanglement.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>
#include <fmt/format.h>

#include "magnomech/error.hpp"

namespace magnomech {

namespace {

double logneg_from_nu(double nu) { return std::max(0.0, -std::log(2.0 * nu)); }

int index_of(Mode m) { return static_cast<int>(m); }

void require_three_modes(const CovarianceMatrix& g, const char* who) {
  if (g.dim() != 6) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("{}: expected a 6x6 CM (got {}x{})", who,
                                                        g.dim(), g.dim()));
  }
}

}  // namespace

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Cavity: return "cavity";
    case Mode::Magnon: return "magnon";
    case Mode::Mechanics: return "mechanics";
  }
  return "?";
}

CovarianceMatrix reduce(const CovarianceMatrix& gamma, std::span<const Mode> modes) {
  require_three_modes(gamma, "reduce");
  if (modes.empty()) throw Error(ErrorCode::InvalidArgument, "reduce: empty mode set");
  for (std::size_t i = 1; i < modes.size(); ++i) {
    if (index_of(modes[i]) <= index_of(modes[i - 1])) {
      throw Error(ErrorCode::InvalidArgument,
                  "reduce: modes must be distinct and listed in cavity, magnon, mechanics order");
    }
  }

  const auto n = static_cast<Eigen::Index>(modes.size());
  Eigen::MatrixXd out(2 * n, 2 * n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      out.block<2, 2>(2 * a, 2 * b) =
          gamma.matrix().block<2, 2>(2 * index_of(modes[static_cast<std::size_t>(a)]),
                                     2 * index_of(modes[static_cast<std::size_t>(b)]));
    }
  }
  return CovarianceMatrix(out);
}

CovarianceMatrix partial_transpose(const CovarianceMatrix& gamma,
                                   std::span<const int> transposed_modes) {
  Eigen::VectorXd signs = Eigen::VectorXd::Ones(gamma.dim());
  for (int m : transposed_modes) {
    if (m < 0 || m >= gamma.modes()) {
      throw Error(ErrorCode::InvalidArgument,
                  fmt::format("partial_transpose: mode index {} out of range", m));
    }
    if (signs(2 * m + 1) < 0.0) {
      throw Error(ErrorCode::InvalidArgument,
                  fmt::format("partial_transpose: mode index {} listed twice", m));
    }
    signs(2 * m + 1) = -1.0;
  }
  return CovarianceMatrix(signs.asDiagonal() * gamma.matrix() * signs.asDiagonal());
}

double logneg_two_mode(const CovarianceMatrix& gamma4, const Tolerances&) {
  if (gamma4.dim() != 4) {
    throw Error(ErrorCode::InvalidArgument, "logneg_two_mode: expected a 4x4 CM");
  }
  const auto& g = gamma4.matrix();
  const double det_a = g.block<2, 2>(0, 0).determinant();
  const double det_b = g.block<2, 2>(2, 2).determinant();
  const double det_c = g.block<2, 2>(0, 2).determinant();
  const double det_g = g.determinant();

  // Seralian invariant of the partial transpose flips the sign of det C.
  const double sigma = det_a + det_b - 2.0 * det_c;
  double disc = sigma * sigma - 4.0 * det_g;
  if (disc < 0.0) {
    if (disc < -1e-9 * sigma * sigma) {
      throw Error(ErrorCode::NegativeDiscriminant,
                  fmt::format("logneg_two_mode: discriminant {:.3g} is negative; the CM is "
                              "not physical",
                              disc));
    }
    disc = 0.0;
  }
  // (sigma - sqrt(disc)) / 2 rewritten to avoid cancellation.
  const double denom = sigma + std::sqrt(disc);
  if (!(denom > 0.0) || det_g < 0.0) {
    throw Error(ErrorCode::NegativeDiscriminant, "logneg_two_mode: CM is not positive definite");
  }
  const double xi = std::sqrt(2.0 * det_g / denom);
  return logneg_from_nu(xi);
}

double logneg_from_spectrum(const CovarianceMatrix& gamma, int transposed, const Tolerances& tol) {
  const auto nu = symplectic_eigenvalues(partial_transpose(gamma, {transposed}), tol);
  return logneg_from_nu(nu.front());
}

double logneg_pair(const CovarianceMatrix& gamma6, Mode a, Mode b, const Tolerances& tol) {
  if (a == b) throw Error(ErrorCode::InvalidArgument, "logneg_pair: modes must differ");
  if (index_of(a) > index_of(b)) std::swap(a, b);
  return logneg_two_mode(reduce(gamma6, {a, b}), tol);
}

double logneg_one_vs_rest(const CovarianceMatrix& gamma6, Mode pivot, const Tolerances& tol) {
  require_three_modes(gamma6, "logneg_one_vs_rest");
  return logneg_from_spectrum(gamma6, index_of(pivot), tol);
}

double residual_contangle(const CovarianceMatrix& gamma6, Mode pivot, Mode j, Mode k,
                          const Tolerances& tol) {
  if (pivot == j || pivot == k || j == k) {
    throw Error(ErrorCode::InvalidArgument, "residual_contangle: modes must be a permutation");
  }
  const double whole = logneg_one_vs_rest(gamma6, pivot, tol);
  const double with_j = logneg_pair(gamma6, pivot, j, tol);
  const double with_k = logneg_pair(gamma6, pivot, k, tol);
  return whole * whole - with_j * with_j - with_k * with_k;
}

ResidualContangles min_residual_contangle(const CovarianceMatrix& gamma6, const Tolerances& tol) {
  ResidualContangles out;
  out.pivots[0] = residual_contangle(gamma6, Mode::Cavity, Mode::Magnon, Mode::Mechanics, tol);
  out.pivots[1] = residual_contangle(gamma6, Mode::Magnon, Mode::Cavity, Mode::Mechanics, tol);
  out.pivots[2] = residual_contangle(gamma6, Mode::Mechanics, Mode::Cavity, Mode::Magnon, tol);

  const double lowest = *std::min_element(out.pivots.begin(), out.pivots.end());
  if (lowest >= -monogamy_tolerance) out.r_min = std::max(0.0, lowest);
  return out;
}

EntanglementRecord evaluate_entanglement(const CovarianceMatrix& gamma6, double stability_margin,
                                         const Tolerances& tol) {
  require_three_modes(gamma6, "evaluate_entanglement");
  EntanglementRecord r;
  r.e_om = logneg_pair(gamma6, Mode::Cavity, Mode::Magnon, tol);
  r.e_oM = logneg_pair(gamma6, Mode::Cavity, Mode::Mechanics, tol);
  r.e_mM = logneg_pair(gamma6, Mode::Magnon, Mode::Mechanics, tol);
  const auto rc = min_residual_contangle(gamma6, tol);
  r.r_min = rc.r_min;
  r.r_pivots = rc.pivots;
  r.stability_margin = stability_margin;
  return r;
}

}  // namespace magnomech
