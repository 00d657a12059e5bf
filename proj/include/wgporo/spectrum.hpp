#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wgporo/assembly.hpp"

namespace wgporo {

using DenseMatrix = Eigen::MatrixXd;

DenseMatrix to_dense(const CsrMatrix& a);

/// D~ = c0 Mp° + kappa dt (Ap°° - Ap°∂ (Ap∂∂)^{-1} Ap∂°), the pressure block
/// after eliminating the facet pressure.
DenseMatrix dense_d_tilde(const AssembledBlocks& blocks);
/// Ap°° - Ap°∂ (Ap∂∂)^{-1} Ap∂°.
DenseMatrix dense_ap_schur(const AssembledBlocks& blocks);

/// One named inequality `value <= limit` (or `>=` when `at_least`).
struct BoundCheck {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool at_least = false;
  bool pass = false;
};

struct SpectralReport {
  std::string tag;  ///< A0A1 | S2 | S2e | S3 | P3A3 | S3lim
  int dim = 2;
  int n = 0;
  double lambda = 0.0;
  double eps = 0.0;
  double c0 = 0.0;
  double dt = 0.0;
  std::vector<double> eigenvalues;  ///< ascending
  double min_eig = 0.0;
  double max_eig = 0.0;
  double bound = 0.0;  ///< the upper bound the tag is checked against
  double beta = 0.0;   ///< inf-sup constant where it enters a check, else 0
  std::vector<BoundCheck> checks;
  bool pass = false;
};

/// Generalized eigenvalues of (A0, A1) against the bound d + 1e-10.
SpectralReport operator_inequality(const AssembledBlocks& blocks);

/// Generalized eigenvalues of (S~2, (eps/mu) D~), i.e. the non-unit
/// eigenvalues of P~2^{-1} A~2, against [1 - 1e-8, bound] where the bound
/// depends on whether c0 > 0.
SpectralReport dense_schur_two_field(const AssembledBlocks& blocks);

/// Full spectrum of P2e^{-1} A2e = {1} u {eps + sigma_j^2}, sigma_j the
/// singular values of Mp°^{-1/2} B° A1^{-1/2}.
SpectralReport dense_schur_elasticity(const AssembledBlocks& blocks);

struct InfSup {
  double beta = 0.0;       ///< smallest singular value above the threshold
  double sigma_max = 0.0;
  int near_zero = 0;       ///< singular values below 1e-8 sigma_max
};

InfSup compute_infsup(const AssembledBlocks& blocks);
/// Throws std::runtime_error unless exactly one singular value is near zero.
double compute_infsup_beta(const AssembledBlocks& blocks);

/// Semidefiniteness of Upper - S~3 and S~3 - Lower (tolerance 1e-8), with
/// the generalized eigenvalues of (S~3, S^~3) as the spectrum.
SpectralReport dense_schur_three_field(const AssembledBlocks& blocks);

/// Spectrum of P~3^{-1} A~3: exactly one eigenvalue <= 10 eps and the rest
/// in [beta^2 - 0.05, d + 10 eps].
SpectralReport preconditioned_three_field(const AssembledBlocks& blocks);

/// Small-eps limit: eig(S^~3^{-1} S~3) against {1} u eig(Mp°^{-1} B° A1^{-1} B°^T),
/// tolerance 1e-4.
SpectralReport three_field_limit(const AssembledBlocks& blocks);

/// Dense forms of the block systems and preconditioners.
struct DensePair {
  DenseMatrix a;
  DenseMatrix p;
};
/// Scaled elasticity saddle system and P2e.
DensePair dense_elasticity_pair(const AssembledBlocks& blocks);
/// Two-field system with P2 (full pressure space).
DensePair dense_two_field_pair(const AssembledBlocks& blocks);
/// Two-field system after facet-pressure elimination with its ideal preconditioner.
DensePair dense_reduced_two_field_pair(const AssembledBlocks& blocks);
/// Three-field system with P3.
DensePair dense_three_field_pair(const AssembledBlocks& blocks);

/// Eigenvalues of P^{-1} A, sorted by real part then imaginary part.
std::vector<std::complex<double>> preconditioned_eigenvalues(const DensePair& pair);

/// Results of the random saddle-point suite for block triangular preconditioning.
struct LemmaSuiteReport {
  int trials = 0;
  double multiset_error = 0.0;       ///< eig(P^{-1}A) vs {1}^k u eig(S^^{-1}S)
  double exact_schur_error = 0.0;    ///< ||(M - I)^2|| for S^ = S
  double c0_poly_error = 0.0;        ///< ||(M - I) prod (M - l_i I)|| for C = 0
  double general_poly_error = 0.0;   ///< ||((M - I) prod (M - l_i I))^2||
  double pinv_error = 0.0;           ///< distance of eig((S+)+^{-1} S) to {0, 1}
  double norm_identity_error = 0.0;  ///< ||C A^{-1} C^T||_2 vs max eig(C^T C, A)
  bool pass = false;
};

/// `trials` random systems with blocks of size <= 6 (total <= 12).
LemmaSuiteReport lemma_a1_suite(std::uint64_t seed, int trials = 50);

std::string spectral_csv_header();
std::string to_csv_row(const SpectralReport& report);
void write_spectral_csv(std::ostream& out, const std::vector<SpectralReport>& reports);

}  // namespace wgporo
