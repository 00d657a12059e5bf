#include "wgporo/ichol.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace wgporo {

BreakdownError::BreakdownError(Index column, double pivot)
    : std::runtime_error("incomplete Cholesky breakdown at column " + std::to_string(column) +
                         " (pivot " + std::to_string(pivot) + ")"),
      column_(column), pivot_(pivot) {}

CsrMatrix ichol_t(const CsrMatrix& a, double droptol, double diag_shift) {
  if (a.rows() != a.cols()) throw std::invalid_argument("ichol_t: matrix must be square");
  if (droptol < 0.0) throw std::invalid_argument("ichol_t: negative drop tolerance");
  const Index n = a.rows();
  const auto& ap = a.row_ptr();
  const auto& ac = a.col_idx();
  const auto& av = a.values();

  // Column storage of L; entry 0 of each column is the diagonal.
  std::vector<std::vector<std::pair<Index, double>>> cols(static_cast<std::size_t>(n));
  // Cursor into each finished column: next entry whose row is still ahead.
  std::vector<std::size_t> cursor(static_cast<std::size_t>(n), 0);
  // pending[j]: columns k < j whose cursor currently sits on row j.
  std::vector<std::vector<Index>> pending(static_cast<std::size_t>(n));

  Vector work(static_cast<std::size_t>(n), 0.0);
  std::vector<char> mark(static_cast<std::size_t>(n), 0);
  std::vector<Index> pattern;

  auto touch = [&](Index i) {
    if (!mark[i]) {
      mark[i] = 1;
      pattern.push_back(i);
    }
  };

  for (Index j = 0; j < n; ++j) {
    pattern.clear();
    // A is symmetric: row j from column j onward is A(j:n, j).
    double col_norm = 0.0;
    for (Index k = ap[j]; k < ap[j + 1]; ++k) {
      if (ac[k] < j) continue;
      touch(ac[k]);
      work[ac[k]] += av[k];
      col_norm += std::abs(av[k]);
    }
    touch(j);
    if (diag_shift != 0.0) work[j] += diag_shift * a.at(j, j);

    auto incoming = std::move(pending[j]);
    pending[j].clear();
    for (Index k : incoming) {
      auto& col = cols[k];
      std::size_t p = cursor[k];
      const double ljk = col[p].second;
      for (std::size_t q = p; q < col.size(); ++q) {
        touch(col[q].first);
        work[col[q].first] -= col[q].second * ljk;
      }
      cursor[k] = p + 1;
      if (cursor[k] < col.size()) pending[col[cursor[k]].first].push_back(k);
    }

    const double pivot = work[j];
    if (!(pivot > 0.0)) {
      for (Index i : pattern) {
        work[i] = 0.0;
        mark[i] = 0;
      }
      throw BreakdownError(j, pivot);
    }
    const double ljj = std::sqrt(pivot);
    const double threshold = droptol * col_norm;
    auto& col = cols[j];
    col.emplace_back(j, ljj);
    std::sort(pattern.begin(), pattern.end());
    for (Index i : pattern) {
      if (i > j) {
        const double v = work[i] / ljj;
        if (v != 0.0 && std::abs(v) >= threshold) col.emplace_back(i, v);
      }
      work[i] = 0.0;
      mark[i] = 0;
    }
    cursor[j] = 1;
    if (col.size() > 1) pending[col[1].first].push_back(j);
  }

  std::vector<Triplet> t;
  for (Index j = 0; j < n; ++j)
    for (const auto& [i, v] : cols[j]) t.push_back({i, j, v});
  return CsrMatrix::from_triplets(n, n, std::move(t));
}

IncompleteCholesky::IncompleteCholesky(const CsrMatrix& a, double droptol) : droptol_(droptol) {
  try {
    lower_ = ichol_t(a, droptol);
  } catch (const BreakdownError&) {
    lower_ = ichol_t(a, droptol, kRetryShift);
    shifted_ = true;
  }
  upper_ = lower_.transpose();
}

void IncompleteCholesky::solve(std::span<const double> rhs, std::span<double> out) const {
  const Index n = lower_.rows();
  if (static_cast<Index>(rhs.size()) != n || static_cast<Index>(out.size()) != n)
    throw std::invalid_argument("shape mismatch: incomplete Cholesky solve");
  {
    const auto& p = lower_.row_ptr();
    const auto& c = lower_.col_idx();
    const auto& v = lower_.values();
    for (Index i = 0; i < n; ++i) {
      double s = rhs[i];
      const Index last = p[i + 1] - 1;  // diagonal
      for (Index k = p[i]; k < last; ++k) s -= v[k] * out[c[k]];
      out[i] = s / v[last];
    }
  }
  {
    const auto& p = upper_.row_ptr();
    const auto& c = upper_.col_idx();
    const auto& v = upper_.values();
    for (Index i = n - 1; i >= 0; --i) {
      double s = out[i];
      const Index first = p[i];  // diagonal
      for (Index k = first + 1; k < p[i + 1]; ++k) s -= v[k] * out[c[k]];
      out[i] = s / v[first];
    }
  }
}

LinearOperator IncompleteCholesky::as_operator() const {
  const IncompleteCholesky* self = this;
  return {lower_.rows(),
          [self](std::span<const double> x, std::span<double> y) { self->solve(x, y); }};
}

}  // namespace wgporo
