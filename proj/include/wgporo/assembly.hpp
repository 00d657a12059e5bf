#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "wgporo/mesh.hpp"
#include "wgporo/problems.hpp"
#include "wgporo/sparse.hpp"

namespace wgporo {

/// Global WG matrices over free dofs, plus the columns coupling free rows
/// to eliminated boundary facet dofs.
///
/// Layouts: displacement vectors have `nu = dofs.vector_size()` entries,
/// pressure vectors `np = dofs.scalar_size()` with the `nel` element
/// interiors first.
struct AssembledBlocks {
  ProblemParams params;
  int dim = 2;
  Index nu = 0;
  Index np = 0;
  Index nel = 0;

  CsrMatrix A1;         ///< nu x nu, (grad_w u, grad_w v)
  CsrMatrix A1_bnd;     ///< nu x vector boundary dofs
  CsrMatrix Bcirc;      ///< nel x nu, -(div_w v, q°)
  CsrMatrix Bcirc_bnd;  ///< nel x vector boundary dofs
  Vector mp;            ///< diagonal of Mp°, entries |E|
  CsrMatrix Mp;         ///< nel x nel
  CsrMatrix Ap;         ///< np x np, (grad_w p, grad_w q)
  CsrMatrix Ap_bnd;     ///< np x scalar boundary dofs
  CsrMatrix A0_direct;  ///< nu x nu, sum over E of |E| Dv^T Dv
  CsrMatrix B;          ///< np x nu, [B°; 0]
  CsrMatrix D;          ///< c0 [Mp° 0; 0 0] + kappa dt Ap
  CsrMatrix D_tilde2;   ///< D + (alpha^2 eps / mu) [Mp° 0; 0 0]

  /// B°^T Mp°^{-1} B° formed explicitly (for checks and dense oracles).
  CsrMatrix A0_product() const;
  /// y = A0 x without forming A0.
  void apply_A0(std::span<const double> x, std::span<double> y) const;
};

AssembledBlocks assemble_blocks(const Mesh& mesh, const DofMap& dofs, const ProblemParams& params);

struct RightHandSide {
  Vector b1;  ///< nu
  Vector b2;  ///< np; facet rows zero before Dirichlet elimination
};

/// Facet averages of the Dirichlet data in boundary numbering.
struct DirichletValues {
  Vector u;  ///< vector boundary dofs
  Vector p;  ///< scalar boundary dofs (empty for pure elasticity)
};

/// Solution of one time level including eliminated boundary values.
struct TimeState {
  Vector u;           ///< nu
  Vector u_boundary;  ///< vector boundary dofs
  Vector p;           ///< np

  static TimeState zero(const DofMap& dofs);
};

DirichletValues project_dirichlet(const Mesh& mesh, const DofMap& dofs,
                                  const ProblemInstance& problem, double t);

/// Loads and previous-step terms of the implicit Euler scheme at time t.
/// `prev` may be null for a zero previous state. Boundary couplings are
/// added separately by apply_dirichlet.
RightHandSide assemble_rhs(const Mesh& mesh, const DofMap& dofs, const AssembledBlocks& blocks,
                           const ProblemInstance& problem, double t, const TimeState* prev);

/// Moves the coupling to eliminated boundary dofs to the right-hand side.
void apply_dirichlet(const AssembledBlocks& blocks, const DirichletValues& values,
                     bool with_pressure, RightHandSide& rhs);

/// Element-interior displacement values of a field, for error norms.
Vector interpolate_interior(const Mesh& mesh, const VectorField& u, double t);

/// Block-structured linear system acting on concatenated unknowns.
struct BlockSystem {
  LinearOperator op;
  Vector rhs;
  std::vector<Index> block_sizes;
};

/// (eps A1 + A0) u = b1 / (lambda + mu). Referenced blocks must outlive
/// the returned operator.
BlockSystem build_elasticity(const AssembledBlocks& blocks, const RightHandSide& rhs);

/// Saddle form on (eps u, w): [A1, -B°^T; -B°, -eps Mp°], rhs [b1/(lambda+mu); 0].
BlockSystem build_elasticity_saddle(const AssembledBlocks& blocks, const RightHandSide& rhs);

/// eps-scaled two-field system on (u, p):
/// [eps A1 + A0, (alpha eps/mu) B^T; (alpha eps/mu) B, -(eps/mu) D],
/// rhs (eps/mu) [b1; b2].
BlockSystem build_two_field(const AssembledBlocks& blocks, const RightHandSide& rhs);

/// Three-field system on (u, (alpha/mu) p, w/eps - (alpha/mu) p°):
/// [A1, 0, -B°^T; 0, -(mu/alpha^2) D~~, -eps [Mp°; 0]; -B°, -eps [Mp° 0], -eps Mp°],
/// rhs [b1/mu; b2/alpha; 0].
BlockSystem build_three_field(const AssembledBlocks& blocks, const RightHandSide& rhs);

/// A file could not be opened, read or written.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Coordinate MatrixMarket with 1-based indices and shortest round-trip
/// decimal values. Symmetric matrices are stored as their lower triangle.
void write_matrix_market(std::ostream& out, const CsrMatrix& a, bool symmetric);
void write_matrix_market(const std::string& path, const CsrMatrix& a, bool symmetric);
CsrMatrix read_matrix_market(std::istream& in);
CsrMatrix read_matrix_market(const std::string& path);

}  // namespace wgporo
