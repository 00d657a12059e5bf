#pragma once

#include <vector>

#include "wgporo/sparse.hpp"

namespace wgporo {

enum class ResidualMeasure {
  preconditioned,  ///< ||M^{-1}(b - Ax)|| <= tol * ||M^{-1} b||
  true_residual,   ///< ||b - Ax|| <= tol * ||b||
  preconditioned_vs_rhs,  ///< ||M^{-1}(b - Ax)|| <= tol * ||b||
};

struct SolverConfig {
  double tol = 1e-6;
  int restart = 30;
  int max_iterations = 2000;
  ResidualMeasure measure = ResidualMeasure::preconditioned;

  void validate() const;
};

struct SolveStats {
  int iterations = 0;   ///< operator applications (GMRES: summed over cycles)
  int restarts = 0;
  bool converged = false;
  double relative_residual = 0.0;       ///< in the configured measure
  double true_relative_residual = 0.0;  ///< ||b - Ax|| / ||b||, recomputed at exit
  std::vector<double> residual_history; ///< relative, one entry per iteration
  std::vector<int> cycle_starts;        ///< history index where each GMRES cycle begins
};

/// Preconditioned conjugate gradients from a zero initial guess. Stops on
/// the recursive residual, then confirms with the true residual.
/// `precond` may be null (no preconditioning).
SolveStats pcg(const LinearOperator& a, const LinearOperator* precond,
               std::span<const double> b, std::span<double> x, const SolverConfig& config);

/// Left-preconditioned restarted GMRES (modified Gram-Schmidt with one
/// selective reorthogonalization pass) from a zero initial guess.
/// On nonconvergence `x` holds the last (smallest-residual) iterate.
SolveStats gmres(const LinearOperator& a, const LinearOperator* precond,
                 std::span<const double> b, std::span<double> x, const SolverConfig& config);

}  // namespace wgporo
