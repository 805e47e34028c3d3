#pragma once

// Bipartite logarithmic negativities, contangles and residual contangles for
// three-mode Gaussian states (cavity, magnon, mechanics).

#include <array>
#include <initializer_list>
#include <optional>
#include <span>
#include <string_view>

#include "magnomech/linalg.hpp"

namespace magnomech {

enum class Mode { Cavity = 0, Magnon = 1, Mechanics = 2 };

inline constexpr std::array<Mode, 3> all_modes{Mode::Cavity, Mode::Magnon, Mode::Mechanics};

std::string_view to_string(Mode m);

/// Rows/columns of the selected modes of a three-mode CM, order preserved.
/// Throws InvalidArgument on an empty, duplicated or unsorted selection.
CovarianceMatrix reduce(const CovarianceMatrix& gamma, std::span<const Mode> modes);
inline CovarianceMatrix reduce(const CovarianceMatrix& gamma, std::initializer_list<Mode> modes) {
  return reduce(gamma, std::span<const Mode>(modes.begin(), modes.size()));
}

/// P gamma P with P flipping the momentum of each listed local mode index
/// (0-based positions within gamma, not Mode values).
CovarianceMatrix partial_transpose(const CovarianceMatrix& gamma,
                                   std::span<const int> transposed_modes);
inline CovarianceMatrix partial_transpose(const CovarianceMatrix& gamma,
                                          std::initializer_list<int> transposed_modes) {
  return partial_transpose(gamma,
                           std::span<const int>(transposed_modes.begin(), transposed_modes.size()));
}

/// Closed-form two-mode log-negativity from the block invariants
/// sigma = det A + det B - 2 det C and det gamma.
double logneg_two_mode(const CovarianceMatrix& gamma4, const Tolerances& tol = {});

/// Log-negativity from the full symplectic spectrum of the partial transpose
/// (transposing local mode `transposed`). Works for 2 and 3 modes.
double logneg_from_spectrum(const CovarianceMatrix& gamma, int transposed,
                            const Tolerances& tol = {});

/// Negativity between two modes of a three-mode CM.
double logneg_pair(const CovarianceMatrix& gamma6, Mode a, Mode b, const Tolerances& tol = {});

/// Negativity of the split pivot | (other two modes).
double logneg_one_vs_rest(const CovarianceMatrix& gamma6, Mode pivot, const Tolerances& tol = {});

/// R^{i|jk} = C_{i|jk} - C_{i|j} - C_{i|k} with C the squared log-negativity.
double residual_contangle(const CovarianceMatrix& gamma6, Mode pivot, Mode j, Mode k,
                          const Tolerances& tol = {});

/// Monogamy slack accepted before a residual contangle counts as negative.
inline constexpr double monogamy_tolerance = 1e-9;

struct ResidualContangles {
  std::array<double, 3> pivots{};  // raw R^{c|md}, R^{m|cd}, R^{d|cm}
  std::optional<double> r_min;     // empty when some pivot < -monogamy_tolerance
};

ResidualContangles min_residual_contangle(const CovarianceMatrix& gamma6,
                                          const Tolerances& tol = {});

struct EntanglementRecord {
  double e_om = 0.0;  // cavity | magnon
  double e_oM = 0.0;  // cavity | mechanics
  double e_mM = 0.0;  // magnon | mechanics
  std::optional<double> r_min;
  std::array<double, 3> r_pivots{};
  double stability_margin = 0.0;

  bool operator==(const EntanglementRecord&) const = default;
};

EntanglementRecord evaluate_entanglement(const CovarianceMatrix& gamma6, double stability_margin,
                                         const Tolerances& tol = {});

}  // namespace magnomech
