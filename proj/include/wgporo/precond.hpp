#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "wgporo/assembly.hpp"
#include "wgporo/ichol.hpp"
#include "wgporo/krylov.hpp"

namespace wgporo {

enum class PrecondKind { p2, p2dlu, p2e, p3, p3dlu };

std::string_view to_string(PrecondKind kind);
PrecondKind precond_kind_from_string(std::string_view name);

/// Drop tolerance of every incomplete Cholesky factor.
inline constexpr double kIcDropTol = 1e-3;
/// Relative tolerance of inner solves inside preconditioners.
inline constexpr double kInnerTol = 1e-10;

/// Tunable parts of the preconditioners.
struct PrecondOptions {
  double inner_tol = kInnerTol;  ///< PCG / nested GMRES tolerance of inner solves
};

/// Counters shared by the inner solves of one preconditioner.
struct InnerStats {
  long solves = 0;
  long iterations = 0;
  long failures = 0;
  double tol = kInnerTol;
  bool ic_shifted = false;

  void merge(const InnerStats& other);
};

/// Approximate inverse of an SPD matrix: PCG with an IC(kIcDropTol)
/// preconditioner to `tol`, or the IC solve alone when `ic_only`.
class SpdInverse {
public:
  SpdInverse(const CsrMatrix& a, bool ic_only, std::shared_ptr<InnerStats> stats,
             double tol = kInnerTol);

  void apply(std::span<const double> r, std::span<double> x) const;
  Index size() const { return matrix_->rows(); }

private:
  const CsrMatrix* matrix_;
  IncompleteCholesky ic_;
  bool ic_only_;
  double tol_;
  std::shared_ptr<InnerStats> stats_;
};

using BlockMap = std::function<void(std::span<const double>, std::span<double>)>;

/// Inverse of P_t = [A, B^T; 0, -S^]: x2 = -S^^{-1} r2, x1 = A^{-1}(r1 - B^T x2).
/// `bt` maps an n2-vector to an n1-vector.
LinearOperator make_block_triangular(Index n1, Index n2, BlockMap apply_ainv, BlockMap bt,
                                     BlockMap apply_shatinv);

/// A preconditioner with the state its operator refers to.
struct Preconditioner {
  PrecondKind kind;
  LinearOperator op;
  std::shared_ptr<InnerStats> stats;
  std::shared_ptr<const void> state;
};

/// [A1, -B°^T; 0, -Mp°]^{-1} for the elasticity saddle system.
Preconditioner p2e_precond(const AssembledBlocks& blocks, const PrecondOptions& opts = {});
/// [eps A1 + A0, (alpha eps/mu) B^T; 0, -(eps/mu) D]^{-1}; the leading block
/// is inverted by a nested elasticity saddle solve.
Preconditioner p2_precond(const AssembledBlocks& blocks, const PrecondOptions& opts = {});
Preconditioner p2dlu_precond(const AssembledBlocks& blocks, const PrecondOptions& opts = {});
/// Block upper triangular with diagonal (A1, -(mu/alpha^2) D~~, -Mp°).
Preconditioner p3_precond(const AssembledBlocks& blocks, const PrecondOptions& opts = {});
Preconditioner p3dlu_precond(const AssembledBlocks& blocks, const PrecondOptions& opts = {});

Preconditioner make_precond(PrecondKind kind, const AssembledBlocks& blocks,
                            const PrecondOptions& opts = {});

/// Outer GMRES settings for the 2D and 3D experiments.
SolverConfig solver_profile(int dim);

struct SolveReport {
  std::string precond;
  ProblemParams params;
  int n = 0;
  int iterations = 0;
  int restarts = 0;
  bool converged = false;
  double relres = 0.0;       ///< in the stopping measure
  double true_relres = 0.0;  ///< ||b - Ax|| / ||b|| of the unpreconditioned system
  /// Elasticity: relative residual of (eps A1 + A0) u = b after u = (eps u)/eps.
  /// Other systems: equal to true_relres.
  double primal_relres = 0.0;
  InnerStats inner;
  double wall_ms = 0.0;
  std::string error;  ///< nonempty when the grid point failed before solving
};

struct SolveResult {
  Vector u;  ///< free displacement dofs
  Vector p;  ///< free pressure dofs (empty for elasticity)
  SolveReport report;
};

/// (eps A1 + A0) u = b1/(lambda+mu) via the saddle form with P2e.
SolveResult solve_elasticity(const AssembledBlocks& blocks, const RightHandSide& rhs,
                             const SolverConfig& config, const PrecondOptions& opts = {});
/// Two-field system with P2 or P2DLU.
SolveResult solve_two_field(const AssembledBlocks& blocks, const RightHandSide& rhs,
                            PrecondKind kind, const SolverConfig& config,
                            const PrecondOptions& opts = {});
/// Three-field system with P3 or P3DLU; p is recovered as (mu/alpha) p^.
SolveResult solve_three_field(const AssembledBlocks& blocks, const RightHandSide& rhs,
                              PrecondKind kind, const SolverConfig& config,
                              const PrecondOptions& opts = {});

/// Dispatches on `kind` (p2e solves elasticity).
SolveResult solve(const AssembledBlocks& blocks, const RightHandSide& rhs, PrecondKind kind,
                  const SolverConfig& config, const PrecondOptions& opts = {});

}  // namespace wgporo
