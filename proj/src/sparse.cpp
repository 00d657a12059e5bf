#include "wgporo/sparse.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace wgporo {

namespace {

void check_shape(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("shape mismatch: ") + what);
}

}  // namespace

CsrMatrix::CsrMatrix(Index rows, Index cols, std::vector<Index> row_ptr,
                     std::vector<Index> col_idx, std::vector<double> values)
    : rows_(rows), cols_(cols), row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)), values_(std::move(values)) {
  if (rows_ < 0 || cols_ < 0) throw std::invalid_argument("negative matrix dimension");
  if (static_cast<Index>(row_ptr_.size()) != rows_ + 1 || row_ptr_.front() != 0 ||
      row_ptr_.back() != static_cast<Index>(col_idx_.size()) ||
      col_idx_.size() != values_.size())
    throw std::invalid_argument("inconsistent CSR arrays");
  for (Index i = 0; i < rows_; ++i) {
    if (row_ptr_[i + 1] < row_ptr_[i]) throw std::invalid_argument("row offsets decrease");
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (col_idx_[k] < 0 || col_idx_[k] >= cols_)
        throw std::invalid_argument("column index out of range");
      if (k > row_ptr_[i] && col_idx_[k] <= col_idx_[k - 1])
        throw std::invalid_argument("column indices not strictly increasing");
    }
  }
}

CsrMatrix CsrMatrix::from_triplets(Index rows, Index cols, std::vector<Triplet> triplets) {
  for (const auto& t : triplets)
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
      throw std::invalid_argument("triplet index out of range");
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<Index> row_ptr(static_cast<std::size_t>(rows) + 1, 0);
  std::vector<Index> col_idx;
  std::vector<double> values;
  col_idx.reserve(triplets.size());
  values.reserve(triplets.size());
  std::size_t k = 0;
  while (k < triplets.size()) {
    const Index r = triplets[k].row;
    const Index c = triplets[k].col;
    double sum = 0.0;
    for (; k < triplets.size() && triplets[k].row == r && triplets[k].col == c; ++k)
      sum += triplets[k].value;
    if (sum != 0.0) {
      col_idx.push_back(c);
      values.push_back(sum);
      ++row_ptr[static_cast<std::size_t>(r) + 1];
    }
  }
  std::partial_sum(row_ptr.begin(), row_ptr.end(), row_ptr.begin());
  CsrMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_ptr_ = std::move(row_ptr);
  m.col_idx_ = std::move(col_idx);
  m.values_ = std::move(values);
  return m;
}

CsrMatrix CsrMatrix::identity(Index n) {
  return diagonal(Vector(static_cast<std::size_t>(n), 1.0));
}

CsrMatrix CsrMatrix::diagonal(std::span<const double> diag) {
  std::vector<Triplet> t;
  t.reserve(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i)
    t.push_back({static_cast<Index>(i), static_cast<Index>(i), diag[i]});
  const auto n = static_cast<Index>(diag.size());
  return from_triplets(n, n, std::move(t));
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  check_shape(static_cast<Index>(x.size()) == cols_ && static_cast<Index>(y.size()) == rows_,
              "spmv");
  for (Index i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x[col_idx_[k]];
    y[i] = s;
  }
}

void CsrMatrix::multiply_add(double alpha, std::span<const double> x,
                             std::span<double> y) const {
  check_shape(static_cast<Index>(x.size()) == cols_ && static_cast<Index>(y.size()) == rows_,
              "spmv");
  for (Index i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x[col_idx_[k]];
    y[i] += alpha * s;
  }
}

void CsrMatrix::multiply_transpose(std::span<const double> x, std::span<double> y) const {
  check_shape(static_cast<Index>(x.size()) == rows_ && static_cast<Index>(y.size()) == cols_,
              "transposed spmv");
  std::fill(y.begin(), y.end(), 0.0);
  for (Index i = 0; i < rows_; ++i)
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) y[col_idx_[k]] += values_[k] * x[i];
}

Vector CsrMatrix::operator*(std::span<const double> x) const {
  Vector y(static_cast<std::size_t>(rows_));
  multiply(x, y);
  return y;
}

double CsrMatrix::at(Index i, Index j) const {
  const auto first = col_idx_.begin() + row_ptr_[i];
  const auto last = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(first, last, j);
  return (it != last && *it == j) ? values_[it - col_idx_.begin()] : 0.0;
}

Vector CsrMatrix::diagonal_values() const {
  Vector d(static_cast<std::size_t>(std::min(rows_, cols_)), 0.0);
  for (Index i = 0; i < static_cast<Index>(d.size()); ++i) d[i] = at(i, i);
  return d;
}

CsrMatrix CsrMatrix::transpose() const {
  std::vector<Index> ptr(static_cast<std::size_t>(cols_) + 1, 0);
  for (Index c : col_idx_) ++ptr[c + 1];
  std::partial_sum(ptr.begin(), ptr.end(), ptr.begin());
  std::vector<Index> next(ptr.begin(), ptr.end() - 1);
  std::vector<Index> idx(col_idx_.size());
  std::vector<double> val(values_.size());
  for (Index i = 0; i < rows_; ++i)
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const Index pos = next[col_idx_[k]]++;
      idx[pos] = i;
      val[pos] = values_[k];
    }
  CsrMatrix t;
  t.rows_ = cols_;
  t.cols_ = rows_;
  t.row_ptr_ = std::move(ptr);
  t.col_idx_ = std::move(idx);
  t.values_ = std::move(val);
  return t;
}

CsrMatrix CsrMatrix::scaled(double alpha) const {
  if (alpha == 0.0) return from_triplets(rows_, cols_, {});
  CsrMatrix s = *this;
  for (double& v : s.values_) v *= alpha;
  return s;
}

CsrMatrix CsrMatrix::submatrix(std::span<const Index> row_set,
                               std::span<const Index> col_set) const {
  std::vector<Index> col_map(static_cast<std::size_t>(cols_), -1);
  for (std::size_t j = 0; j < col_set.size(); ++j) col_map[col_set[j]] = static_cast<Index>(j);
  std::vector<Triplet> t;
  for (std::size_t r = 0; r < row_set.size(); ++r) {
    const Index i = row_set[r];
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      if (const Index j = col_map[col_idx_[k]]; j >= 0)
        t.push_back({static_cast<Index>(r), j, values_[k]});
  }
  return from_triplets(static_cast<Index>(row_set.size()), static_cast<Index>(col_set.size()),
                       std::move(t));
}

double CsrMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s);
}

double CsrMatrix::symmetry_defect() const {
  if (rows_ != cols_) return std::numeric_limits<double>::infinity();
  double max_abs = 0.0, defect = 0.0;
  for (Index i = 0; i < rows_; ++i)
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      max_abs = std::max(max_abs, std::abs(values_[k]));
      defect = std::max(defect, std::abs(values_[k] - at(col_idx_[k], i)));
    }
  return max_abs > 0.0 ? defect / max_abs : 0.0;
}

std::vector<Triplet> CsrMatrix::to_triplets() const {
  std::vector<Triplet> t;
  t.reserve(values_.size());
  for (Index i = 0; i < rows_; ++i)
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      t.push_back({i, col_idx_[k], values_[k]});
  return t;
}

CsrMatrix add(double alpha, const CsrMatrix& a, double beta, const CsrMatrix& b) {
  check_shape(a.rows() == b.rows() && a.cols() == b.cols(), "matrix sum");
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(a.nnz() + b.nnz()));
  for (auto tr : a.to_triplets()) t.push_back({tr.row, tr.col, alpha * tr.value});
  for (auto tr : b.to_triplets()) t.push_back({tr.row, tr.col, beta * tr.value});
  return CsrMatrix::from_triplets(a.rows(), a.cols(), std::move(t));
}

CsrMatrix multiply(const CsrMatrix& a, const CsrMatrix& b) {
  check_shape(a.cols() == b.rows(), "matrix product");
  std::vector<Triplet> t;
  const auto& ap = a.row_ptr();
  const auto& ac = a.col_idx();
  const auto& av = a.values();
  const auto& bp = b.row_ptr();
  const auto& bc = b.col_idx();
  const auto& bv = b.values();
  Vector acc(static_cast<std::size_t>(b.cols()), 0.0);
  std::vector<char> used(static_cast<std::size_t>(b.cols()), 0);
  std::vector<Index> pattern;
  for (Index i = 0; i < a.rows(); ++i) {
    pattern.clear();
    for (Index k = ap[i]; k < ap[i + 1]; ++k) {
      const Index j = ac[k];
      for (Index l = bp[j]; l < bp[j + 1]; ++l) {
        if (!used[bc[l]]) {
          used[bc[l]] = 1;
          pattern.push_back(bc[l]);
        }
        acc[bc[l]] += av[k] * bv[l];
      }
    }
    std::sort(pattern.begin(), pattern.end());
    for (Index c : pattern) {
      t.push_back({i, c, acc[c]});
      acc[c] = 0.0;
      used[c] = 0;
    }
  }
  return CsrMatrix::from_triplets(a.rows(), b.cols(), std::move(t));
}

double dot(std::span<const double> x, std::span<const double> y) {
  check_shape(x.size() == y.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  check_shape(x.size() == y.size(), "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

LinearOperator as_operator(const CsrMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("operator must be square");
  const CsrMatrix* m = &a;
  return {a.rows(), [m](std::span<const double> x, std::span<double> y) { m->multiply(x, y); }};
}

LinearOperator identity_operator(Index n) {
  return {n, [](std::span<const double> x, std::span<double> y) {
            std::copy(x.begin(), x.end(), y.begin());
          }};
}

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace wgporo
