#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace wgporo {

using Vector = std::vector<double>;
using Index = std::int64_t;

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Compressed sparse row matrix. Column indices are strictly increasing
/// within each row and no exact zeros are stored.
class CsrMatrix {
public:
  CsrMatrix() = default;
  CsrMatrix(Index rows, Index cols, std::vector<Index> row_ptr,
            std::vector<Index> col_idx, std::vector<double> values);

  /// Duplicates are summed in insertion order, so the result is a pure
  /// function of the triplet sequence.
  static CsrMatrix from_triplets(Index rows, Index cols,
                                 std::vector<Triplet> triplets);
  static CsrMatrix identity(Index n);
  static CsrMatrix diagonal(std::span<const double> diag);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index nnz() const { return static_cast<Index>(values_.size()); }

  const std::vector<Index>& row_ptr() const { return row_ptr_; }
  const std::vector<Index>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  /// y += alpha * A x
  void multiply_add(double alpha, std::span<const double> x,
                    std::span<double> y) const;
  /// y = A^T x
  void multiply_transpose(std::span<const double> x, std::span<double> y) const;

  Vector operator*(std::span<const double> x) const;

  double at(Index i, Index j) const;
  Vector diagonal_values() const;
  CsrMatrix transpose() const;
  CsrMatrix scaled(double alpha) const;

  /// Rows `row_set` and columns `col_set`, renumbered in the given order.
  CsrMatrix submatrix(std::span<const Index> row_set,
                      std::span<const Index> col_set) const;

  double frobenius_norm() const;
  /// Maximum |a_ij - a_ji| over the stored pattern, relative to max |a_ij|.
  double symmetry_defect() const;

  std::vector<Triplet> to_triplets() const;

private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Index> row_ptr_{0};
  std::vector<Index> col_idx_;
  std::vector<double> values_;
};

/// alpha*A + beta*B (same shape).
CsrMatrix add(double alpha, const CsrMatrix& a, double beta, const CsrMatrix& b);
/// A * B
CsrMatrix multiply(const CsrMatrix& a, const CsrMatrix& b);

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// Shortest decimal text that reads back to the same double.
std::string shortest(double v);

/// A square linear map given only by its action.
struct LinearOperator {
  Index size = 0;
  std::function<void(std::span<const double>, std::span<double>)> apply;

  Vector operator()(std::span<const double> x) const {
    Vector y(x.size());
    apply(x, y);
    return y;
  }
};

LinearOperator as_operator(const CsrMatrix& a);
LinearOperator identity_operator(Index n);

}  // namespace wgporo
