#include <gtest/gtest.h>

#include <random>

#include "wgporo/experiment.hpp"
#include "wgporo/precond.hpp"

namespace wgporo {
namespace {

ProblemParams params(double lambda, double c0, double dt) {
  return ProblemParams::make(2, 1.0, lambda, 1.0, c0, 1.0, dt);
}

int iterations(ProblemKind kind, int n, double lambda, double c0, double dt, PrecondKind pk) {
  const SolveReport r = run_point(kind, n, params(lambda, c0, dt), pk, solver_profile(2));
  EXPECT_TRUE(r.converged) << r.error;
  return r.iterations;
}

Vector random_vector(std::mt19937& rng, Index n) {
  std::normal_distribution<double> nd;
  Vector v(static_cast<size_t>(n));
  for (double& x : v) x = nd(rng);
  return v;
}

TEST(PrecondKind, RoundTrip) {
  for (PrecondKind k : {PrecondKind::p2, PrecondKind::p2dlu, PrecondKind::p2e, PrecondKind::p3,
                        PrecondKind::p3dlu})
    EXPECT_EQ(precond_kind_from_string(to_string(k)), k);
  EXPECT_THROW(precond_kind_from_string("p3damg"), std::invalid_argument);
}

TEST(BlockTriangular, BackSubstitutionSigns) {
  // P = [2, 1; 0, -4] on scalars: P^{-1} (r1, r2) = ((r1 + r2/4)/2, -r2/4).
  const LinearOperator p = make_block_triangular(
      1, 1, [](std::span<const double> r, std::span<double> x) { x[0] = r[0] / 2; },
      [](std::span<const double> s, std::span<double> y) { y[0] = s[0]; },
      [](std::span<const double> r, std::span<double> x) { x[0] = r[0] / 4; });
  const Vector x = p(Vector{3.0, 8.0});
  EXPECT_DOUBLE_EQ(x[1], -2.0);
  EXPECT_DOUBLE_EQ(x[0], 2.5);
}

TEST(SolveElasticity, RecoversManufacturedSolution) {
  const Mesh mesh(8, 2);
  const DofMap dofs(mesh);
  const AssembledBlocks b = assemble_blocks(mesh, dofs, params(1.4286, 1.0, 1e-3));
  std::mt19937 rng(1);
  const Vector u = random_vector(rng, b.nu);
  // b1/(lambda + mu) = (eps A1 + A0) u
  Vector y(u.size()), a0u(u.size());
  b.A1.multiply(u, y);
  b.apply_A0(u, a0u);
  RightHandSide rhs{Vector(u.size()), Vector(static_cast<size_t>(b.np))};
  for (size_t i = 0; i < u.size(); ++i)
    rhs.b1[i] = (b.params.eps * y[i] + a0u[i]) * (b.params.lambda + b.params.mu);
  SolverConfig cfg;
  cfg.tol = 1e-10;
  const SolveResult r = solve_elasticity(b, rhs, cfg);
  ASSERT_TRUE(r.report.converged);
  Vector err(r.u);
  axpy(-1.0, u, err);
  EXPECT_LE(norm2(err), 1e-5 * norm2(u));

  // Linearity in the right-hand side.
  RightHandSide scaled = rhs;
  for (double& v : scaled.b1) v *= 8.0;
  const SolveResult r8 = solve_elasticity(b, scaled, cfg);
  double dev = 0.0;
  for (size_t i = 0; i < u.size(); ++i) dev = std::max(dev, std::abs(r8.u[i] - 8.0 * r.u[i]));
  EXPECT_LE(dev, 1e-12 * 8.0 * norm2(r.u));
}

TEST(P2e, IterationsAtN8) {
  const int it = iterations(ProblemKind::elasticity2d, 8, 1.4286, 1.0, 1e-3, PrecondKind::p2e);
  EXPECT_GE(it, 14);
  EXPECT_LE(it, 28);
}

TEST(P2, ExamplesAtN8) {
  EXPECT_LE(iterations(ProblemKind::poro2d, 8, 1.6667e6, 1.0, 1e-3, PrecondKind::p2), 4);
  const int it = iterations(ProblemKind::poro2d, 8, 1.4286, 1.0, 1e-3, PrecondKind::p2);
  EXPECT_GE(it, 5);
  EXPECT_LE(it, 10);
}

TEST(P2dlu, ComparableToP2WithStorage) {
  for (double lambda : {1.4286, 1.6667e3, 1.6667e6})
    for (double dt : {1e-3, 1e-6}) {
      const int a = iterations(ProblemKind::poro2d, 8, lambda, 1.0, dt, PrecondKind::p2);
      const int b = iterations(ProblemKind::poro2d, 8, lambda, 1.0, dt, PrecondKind::p2dlu);
      EXPECT_LE(std::abs(a - b), 3) << lambda << " " << dt;
    }
}

TEST(P3, ExamplesAtN8) {
  const int a = iterations(ProblemKind::poro2d, 8, 1.4286, 1.0, 1e-3, PrecondKind::p3);
  EXPECT_GE(a, 12);
  EXPECT_LE(a, 23);
  const int b = iterations(ProblemKind::poro2d, 8, 1.4286, 0.0, 1e-6, PrecondKind::p3);
  EXPECT_GE(b, 18);
  EXPECT_LE(b, 35);
  const int c = iterations(ProblemKind::poro2d, 8, 1.6667e6, 1.0, 1e-3, PrecondKind::p3);
  EXPECT_GE(c, 10);
  EXPECT_LE(c, 19);
}

// Locking lambda: counts over n = 8..64 vary by at most 50% (max/min <= 1.5).
TEST(MeshRobustness, LockingCountsStable) {
  for (auto [kind, pk] : {std::pair{ProblemKind::poro2d, PrecondKind::p2},
                          {ProblemKind::elasticity2d, PrecondKind::p2e},
                          {ProblemKind::poro2d, PrecondKind::p3}}) {
    int lo = 1 << 30, hi = 0;
    for (int n : {8, 16, 32, 64}) {
      const int it = iterations(kind, n, 1.6667e6, 1.0, 1e-3, pk);
      lo = std::min(lo, it);
      hi = std::max(hi, it);
    }
    EXPECT_LE(hi, 1.5 * lo) << to_string(pk) << " " << lo << ".." << hi;
  }
}

TEST(P3dlu, ComparableToP3WithStorage) {
  for (double lambda : {1.4286, 1.6667e3, 1.6667e6})
    for (double dt : {1e-3, 1e-6}) {
      const int a = iterations(ProblemKind::poro2d, 8, lambda, 1.0, dt, PrecondKind::p3);
      const int b = iterations(ProblemKind::poro2d, 8, lambda, 1.0, dt, PrecondKind::p3dlu);
      EXPECT_LE(std::abs(a - b), 3) << lambda << " " << dt;
    }
}

TEST(Solve, ConvergedImpliesSmallTrueResidual) {
  for (PrecondKind k : {PrecondKind::p2, PrecondKind::p2dlu, PrecondKind::p3, PrecondKind::p3dlu})
    for (double lambda : {1.4286, 1.6667e6}) {
      const SolveReport r = run_point(ProblemKind::poro2d, 4, params(lambda, 0.0, 1e-3), k, solver_profile(2));
      ASSERT_TRUE(r.converged);
      EXPECT_LE(r.true_relres, 10 * solver_profile(2).tol) << to_string(k) << " " << lambda;
      EXPECT_GT(r.inner.solves, 0);
      EXPECT_EQ(r.inner.failures, 0);
    }
}

TEST(SolverProfile, TwoAndThreeDimensions) {
  EXPECT_EQ(solver_profile(2).tol, 1e-6);
  EXPECT_EQ(solver_profile(2).restart, 30);
  EXPECT_EQ(solver_profile(3).tol, 1e-3);
  EXPECT_EQ(solver_profile(3).restart, 28);
}

}  // namespace
}  // namespace wgporo
