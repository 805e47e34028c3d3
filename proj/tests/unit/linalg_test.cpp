#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "gaussian_oracles.hpp"
#include "magnomech/constants.hpp"
#include "magnomech/error.hpp"
#include "magnomech/linalg.hpp"
#include "magnomech/sweep.hpp"

namespace magnomech {
namespace {

using constants::angular;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected magnomech::Error";
  return ErrorCode::InvalidArgument;
}

DriftMatrix diagonal_drift(double kappa) {
  DriftMatrix f;
  f.m = -kappa * Mat6::Identity();
  return f;
}

DiffusionMatrix uniform_diffusion(double v) {
  DiffusionMatrix d;
  d.diag.setConstant(v);
  return d;
}

struct OperatingPoint {
  DriftMatrix f;
  DiffusionMatrix d;
  SystemParams p;
};

OperatingPoint fig2_point() {
  OperatingPoint op;
  op.p = baseline_params();
  const auto derived = derive(op.p);
  op.f = build_drift(op.p, derived);
  op.d = build_diffusion(op.p, derived);
  return op;
}

TEST(SymplecticForm, Structure) {
  for (int n = 1; n <= 3; ++n) {
    const auto o = symplectic_form(n);
    EXPECT_EQ(o.transpose(), -o);
    EXPECT_EQ(o * o, -Eigen::MatrixXd::Identity(2 * n, 2 * n));
  }
}

TEST(CovarianceMatrix, SymmetrizesOnConstruction) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
  m(0, 1) = 0.2;
  m(1, 0) = 0.4;
  const CovarianceMatrix g(m);
  EXPECT_EQ(g(0, 1), g(1, 0));
  EXPECT_DOUBLE_EQ(g(0, 1), 0.3);
  EXPECT_THROW(CovarianceMatrix(Eigen::MatrixXd::Identity(3, 3)), Error);
}

TEST(StabilityMargin, DampedIdentity) {
  EXPECT_DOUBLE_EQ(stability_margin(diagonal_drift(3.0)), -3.0);
}

TEST(StabilityMargin, DecoupledModesFollowBlockRoots) {
  auto p = baseline_params();
  p.g_mc = 0.0;
  p.G_md = 0.0;
  const auto d = derive(p);
  const double margin = stability_margin(build_drift(p, d));
  // Roots of the 2x2 blocks: -kappa_fb, -kappa_m and -gamma_d/2 (underdamped).
  const double expected = std::max({-d.kappa_fb, -p.kappa_m, -0.5 * p.gamma_d});
  EXPECT_NEAR(margin, expected, 1e-6 * p.gamma_d);
  EXPECT_LT(margin, 0.0);
}

TEST(StabilityMargin, StrongInPhaseFeedbackIsUnstable) {
  auto p = baseline_params();
  p.g_mc = 0.0;
  p.G_md = 0.0;
  p.tau = 0.6;
  const auto d = derive(p);
  ASSERT_LT(d.kappa_fb, 0.0);
  EXPECT_NEAR(stability_margin(build_drift(p, d)), -d.kappa_fb, 1e-9 * p.kappa_c);
}

TEST(Lyapunov, IsolatedDampedModes) {
  const double kappa = 2.0;
  const double n = 3.0;
  const auto g = solve_lyapunov_steady(diagonal_drift(kappa), uniform_diffusion(kappa * (2 * n + 1)));
  EXPECT_TRUE(g.matrix().isApprox((n + 0.5) * Eigen::MatrixXd::Identity(6, 6), 1e-14));
}

TEST(Lyapunov, OperatingPointResidualAndPhysicality) {
  const auto op = fig2_point();
  const auto g = solve_lyapunov_steady(op.f, op.d);
  EXPECT_LE(lyapunov_residual(op.f, op.d, g), 1e-10);
  EXPECT_EQ(g.matrix(), g.matrix().transpose());
  for (double nu : symplectic_eigenvalues(g)) EXPECT_GE(nu, 0.5 - 1e-9);
}

TEST(Lyapunov, AgreesWithEigenbasisOracle) {
  const auto op = fig2_point();
  const auto g = solve_lyapunov_steady(op.f, op.d);
  const Eigen::MatrixXd ref = testing::lyapunov_by_eigenbasis(op.f.m, op.d.dense());
  EXPECT_LT((g.matrix() - ref).norm() / ref.norm(), 1e-9);
}

TEST(Lyapunov, RejectsUnstableDrift) {
  EXPECT_EQ(code_of([] { solve_lyapunov_steady(diagonal_drift(-1.0), uniform_diffusion(1.0)); }),
            ErrorCode::UnstableDrift);
}

TEST(Lyapunov, MarginSignDecidesSolvability) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int stable = 0, unstable = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto p = baseline_params();
    p.delta_c = angular(2e7 * u(rng));
    p.delta_m_eff = angular(2e7 * u(rng));
    p.tau = 0.35 + 0.35 * u(rng);
    const auto d = derive(p);
    const auto f = build_drift(p, d);
    const auto diff = build_diffusion(p, d);
    if (stability_margin(f) < 0.0) {
      ++stable;
      EXPECT_NO_THROW(solve_lyapunov_steady(f, diff));
    } else {
      ++unstable;
      EXPECT_THROW(solve_lyapunov_steady(f, diff), Error);
    }
  }
  EXPECT_GT(stable, 0);
  EXPECT_GT(unstable, 0);
}

TEST(EvolveCm, FrozenDynamicsKeepInitialState) {
  DriftMatrix f;
  DiffusionMatrix d;
  const auto g0 = CovarianceMatrix::identity(3);
  const std::vector<double> t{0.0, 1.0, 2.0};
  EvolveOptions opts;
  opts.step = 0.1;
  const auto out = evolve_cm(f, d, g0, t, opts);
  ASSERT_EQ(out.size(), 3u);
  for (const auto& g : out) EXPECT_EQ(g, g0);
}

TEST(EvolveCm, ConvergesToSteadyState) {
  const auto op = fig2_point();
  const double margin = stability_margin(op.f);
  const std::vector<double> t{0.0, 20.0 / std::abs(margin)};
  EvolveOptions opts;
  opts.reference_rate = op.p.omega_d;
  const auto out = evolve_cm(op.f, op.d, CovarianceMatrix::vacuum(3), t, opts);
  const auto steady = solve_lyapunov_steady(op.f, op.d);
  EXPECT_LT((out.back().matrix() - steady.matrix()).norm(), 1e-6 * steady.matrix().norm());
}

TEST(EvolveCm, FourthOrderConvergence) {
  const auto op = fig2_point();
  const double t_end = 2e-7;
  const std::vector<double> t{0.0, t_end};
  const auto g0 = CovarianceMatrix::vacuum(3);
  auto run = [&](double h) {
    EvolveOptions o;
    o.step = h;
    return evolve_cm(op.f, op.d, g0, t, o).back().matrix();
  };
  const double h = t_end / 200.0;
  const Eigen::MatrixXd ref = run(h / 32.0);
  const double e1 = (run(h) - ref).norm();
  const double e2 = (run(h / 2.0) - ref).norm();
  const double ratio = e1 / e2;
  EXPECT_GT(ratio, 13.0);
  EXPECT_LT(ratio, 19.0);
}

TEST(EvolveCm, PreservesSymmetryAndPhysicality) {
  const auto op = fig2_point();
  std::vector<double> t;
  for (int i = 0; i <= 300; ++i) t.push_back(i * 1e-8);
  EvolveOptions opts;
  opts.reference_rate = op.p.omega_d;
  for (const auto& g0 : {CovarianceMatrix::vacuum(3), CovarianceMatrix::identity(3)}) {
    for (const auto& g : evolve_cm(op.f, op.d, g0, t, opts)) {
      EXPECT_EQ(g.matrix(), g.matrix().transpose());
      EXPECT_GE(symplectic_eigenvalues(g).front(), 0.5 - 1e-6);
    }
  }
}

TEST(EvolveCm, StepBoundIsEnforced) {
  const auto op = fig2_point();
  const std::vector<double> t{0.0, 1e-6};
  EvolveOptions opts;
  opts.reference_rate = op.p.omega_d;
  const double h = default_step(op.f, opts);
  opts.step = 20.0 * h;
  EXPECT_EQ(code_of([&] { evolve_cm(op.f, op.d, CovarianceMatrix::vacuum(3), t, opts); }),
            ErrorCode::StepTooLarge);
  opts.step = 5.0 * h;
  EXPECT_NO_THROW(evolve_cm(op.f, op.d, CovarianceMatrix::vacuum(3), t, opts));
}

TEST(EvolveCm, OverflowIsReported) {
  const auto op = fig2_point();
  DriftMatrix f = diagonal_drift(-1e9);
  const std::vector<double> t{0.0, 1e-6};
  EXPECT_EQ(code_of([&] { evolve_cm(f, op.d, CovarianceMatrix::vacuum(3), t); }),
            ErrorCode::NonFiniteState);
}

TEST(EvolveCm, RejectsBadGrid) {
  const auto op = fig2_point();
  const std::vector<double> not_from_zero{1e-9, 2e-9};
  const std::vector<double> decreasing{0.0, 2e-9, 1e-9};
  EXPECT_THROW(evolve_cm(op.f, op.d, CovarianceMatrix::vacuum(3), not_from_zero), Error);
  EXPECT_THROW(evolve_cm(op.f, op.d, CovarianceMatrix::vacuum(3), decreasing), Error);
}

TEST(SymplecticEigenvalues, Vacuum) {
  for (int n = 1; n <= 3; ++n) {
    for (double nu : symplectic_eigenvalues(CovarianceMatrix::vacuum(n))) EXPECT_NEAR(nu, 0.5, 1e-15);
  }
}

TEST(SymplecticEigenvalues, ThermalProduct) {
  const auto nu = symplectic_eigenvalues(testing::thermal_product({2.0, 0.0, 0.7}));
  ASSERT_EQ(nu.size(), 3u);
  EXPECT_NEAR(nu[0], 0.5, 1e-14);
  EXPECT_NEAR(nu[1], 1.2, 1e-14);
  EXPECT_NEAR(nu[2], 2.5, 1e-14);
}

TEST(SymplecticEigenvalues, TwoModeSqueezedIsPure) {
  for (double r : {0.1, 0.5, 1.0}) {
    for (double nu : symplectic_eigenvalues(testing::two_mode_squeezed(r))) EXPECT_NEAR(nu, 0.5, 1e-12);
  }
}

TEST(SymplecticEigenvalues, MatchesHermitianRoute) {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 3;
    const auto g = testing::random_physical_cm(n, rng);
    const auto a = symplectic_eigenvalues(g);
    const auto b = testing::symplectic_spectrum_hermitian(g);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-9 * b[k]);
  }
}

TEST(SymplecticEigenvalues, InvariantUnderLocalRotations) {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> angle(0.0, 6.28);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = testing::random_physical_cm(3, rng);
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(6, 6);
    for (int m = 0; m < 3; ++m) s = testing::rotation(3, m, angle(rng)) * s;
    const auto a = symplectic_eigenvalues(g);
    const auto b = symplectic_eigenvalues(Eigen::MatrixXd(s * g * s.transpose()));
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-9 * a[k]);
  }
}

TEST(SymplecticEigenvalues, RejectsAsymmetricAndOddInput) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(4, 4);
  m(0, 1) = 0.1;
  EXPECT_EQ(code_of([&] { symplectic_eigenvalues(m); }), ErrorCode::AsymmetricInput);
  EXPECT_THROW(symplectic_eigenvalues(Eigen::MatrixXd::Identity(3, 3)), Error);
  EXPECT_THROW(symplectic_eigenvalues(Eigen::MatrixXd::Identity(8, 8)), Error);
}

TEST(SymplecticEigenvalues, UnpairedSpectrumIsFlagged) {
  // A corrupted (non-symmetric) matrix let through by a relaxed symmetry
  // tolerance has a spectrum without +/- pairs.
  // Omega * m = diag(1, 2): real eigenvalues of different modulus.
  Eigen::MatrixXd m(2, 2);
  m << 0.0, -2.0, 1.0, 0.0;
  Tolerances relaxed;
  relaxed.symmetry = 10.0;
  EXPECT_EQ(code_of([&] { symplectic_eigenvalues(m, relaxed); }), ErrorCode::NonPairedSpectrum);
}

}  // namespace
}  // namespace magnomech
