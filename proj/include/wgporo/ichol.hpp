#pragma once

#include <stdexcept>
#include <string>

#include "wgporo/sparse.hpp"

namespace wgporo {

/// A nonpositive pivot was met during incomplete factorization.
class BreakdownError : public std::runtime_error {
public:
  BreakdownError(Index column, double pivot);
  Index column() const { return column_; }
  double pivot() const { return pivot_; }

private:
  Index column_;
  double pivot_;
};

/// Threshold-dropping incomplete Cholesky, column oriented (left looking).
///
/// Off-diagonal L(i,j) is kept only when |L(i,j)| >= droptol * ||A(j:n,j)||_1.
/// The diagonal is always kept. `diag_shift` factors A + diag_shift*diag(A)
/// instead of A. Only the lower triangle of `a` is read. Returns lower
/// triangular L with A ~ L L^T; throws BreakdownError on a nonpositive pivot.
CsrMatrix ichol_t(const CsrMatrix& a, double droptol, double diag_shift = 0.0);

/// Applies (L L^T)^{-1} for an incomplete factor L. If plain factorization
/// breaks down, it is retried once with a 1e-3*diag(A) shift.
class IncompleteCholesky {
public:
  static constexpr double kRetryShift = 1e-3;

  IncompleteCholesky(const CsrMatrix& a, double droptol);

  void solve(std::span<const double> rhs, std::span<double> out) const;
  LinearOperator as_operator() const;

  const CsrMatrix& factor() const { return lower_; }
  bool shifted() const { return shifted_; }
  double droptol() const { return droptol_; }

private:
  CsrMatrix lower_;
  CsrMatrix upper_;  // L^T
  double droptol_;
  bool shifted_ = false;
};

}  // namespace wgporo
