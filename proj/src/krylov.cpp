#include "wgporo/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wgporo {

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("solver tolerance must be positive");
  if (restart < 1) throw std::invalid_argument("restart must be at least 1");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be at least 1");
}

namespace {

void check_sizes(const LinearOperator& a, const LinearOperator* m, std::span<const double> b,
                 std::span<double> x) {
  if (static_cast<Index>(b.size()) != a.size || x.size() != b.size() ||
      (m != nullptr && m->size != a.size))
    throw std::invalid_argument("shape mismatch: Krylov solve");
}

double true_residual_norm(const LinearOperator& a, std::span<const double> b,
                          std::span<const double> x, Vector& work) {
  a.apply(x, work);
  for (std::size_t i = 0; i < work.size(); ++i) work[i] = b[i] - work[i];
  return norm2(work);
}

void apply_or_copy(const LinearOperator* m, std::span<const double> in, std::span<double> out) {
  if (m != nullptr)
    m->apply(in, out);
  else
    std::copy(in.begin(), in.end(), out.begin());
}

}  // namespace

SolveStats pcg(const LinearOperator& a, const LinearOperator* precond,
               std::span<const double> b, std::span<double> x, const SolverConfig& config) {
  config.validate();
  check_sizes(a, precond, b, x);
  const std::size_t n = b.size();
  SolveStats stats;
  std::fill(x.begin(), x.end(), 0.0);
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    stats.converged = true;
    return stats;
  }
  Vector r(b.begin(), b.end()), z(n), p(n), q(n);
  // The recursive residual can drift from the true one; a confirmed
  // failure restarts the recurrence from the true residual.
  for (int attempt = 0; attempt < 3; ++attempt) {
    apply_or_copy(precond, r, z);
    p = z;
    double rz = dot(r, z);
    double rnorm = norm2(r);
    while (rnorm > config.tol * bnorm && stats.iterations < config.max_iterations) {
      a.apply(p, q);
      const double pq = dot(p, q);
      if (!(pq > 0.0)) break;  // operator not positive definite along p
      const double alpha = rz / pq;
      axpy(alpha, p, x);
      axpy(-alpha, q, r);
      ++stats.iterations;
      rnorm = norm2(r);
      stats.residual_history.push_back(rnorm / bnorm);
      if (rnorm <= config.tol * bnorm) break;
      apply_or_copy(precond, r, z);
      const double rz_new = dot(r, z);
      const double beta = rz_new / rz;
      rz = rz_new;
      for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    stats.true_relative_residual = true_residual_norm(a, b, x, r) / bnorm;
    if (stats.true_relative_residual <= config.tol || stats.iterations >= config.max_iterations)
      break;
    if (rnorm > config.tol * bnorm) break;  // broke down, not a drift problem
  }
  stats.relative_residual = stats.true_relative_residual;
  stats.converged = stats.true_relative_residual <= config.tol;
  return stats;
}

SolveStats gmres(const LinearOperator& a, const LinearOperator* precond,
                 std::span<const double> b, std::span<double> x, const SolverConfig& config) {
  config.validate();
  check_sizes(a, precond, b, x);
  const std::size_t n = b.size();
  const int m = config.restart;
  const bool use_true = config.measure == ResidualMeasure::true_residual;
  SolveStats stats;
  std::fill(x.begin(), x.end(), 0.0);

  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    stats.converged = true;
    return stats;
  }

  Vector r(n), work(n), candidate(n);
  apply_or_copy(precond, b, r);
  const double pbnorm = norm2(r);
  const double reference =
      (use_true || config.measure == ResidualMeasure::preconditioned_vs_rhs) ? bnorm : pbnorm;
  if (pbnorm == 0.0) throw std::runtime_error("gmres: preconditioner annihilates the rhs");

  std::vector<Vector> basis(static_cast<std::size_t>(m) + 1, Vector(n));
  std::vector<std::vector<double>> hess(static_cast<std::size_t>(m) + 1,
                                        std::vector<double>(static_cast<std::size_t>(m), 0.0));
  std::vector<double> cs(static_cast<std::size_t>(m)), sn(static_cast<std::size_t>(m));
  std::vector<double> g(static_cast<std::size_t>(m) + 1);
  std::vector<double> y(static_cast<std::size_t>(m));

  // Solves the k x k upper triangular least-squares system and forms
  // out = x + V_k y.
  auto combine = [&](int k, std::span<double> out) {
    for (int i = k - 1; i >= 0; --i) {
      double s = g[i];
      for (int j = i + 1; j < k; ++j) s -= hess[i][j] * y[j];
      y[i] = s / hess[i][i];
    }
    std::copy(x.begin(), x.end(), out.begin());
    for (int j = 0; j < k; ++j) axpy(y[j], basis[j], out);
  };

  double beta = pbnorm;
  bool done = false;
  double current = use_true ? 1.0 : beta / reference;
  while (!done) {
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;
    for (std::size_t i = 0; i < n; ++i) basis[0][i] = r[i] / beta;
    stats.cycle_starts.push_back(static_cast<int>(stats.residual_history.size()));

    int k = 0;
    bool breakdown = false;
    while (k < m && stats.iterations < config.max_iterations) {
      auto& w = basis[k + 1];
      a.apply(basis[k], work);
      apply_or_copy(precond, work, w);
      ++stats.iterations;

      const double before = norm2(w);
      for (int i = 0; i <= k; ++i) {
        hess[i][k] = dot(w, basis[i]);
        axpy(-hess[i][k], basis[i], w);
      }
      double after = norm2(w);
      if (after < before / std::sqrt(2.0)) {
        for (int i = 0; i <= k; ++i) {
          const double c = dot(w, basis[i]);
          hess[i][k] += c;
          axpy(-c, basis[i], w);
        }
        after = norm2(w);
      }
      hess[k + 1][k] = after;

      for (int i = 0; i < k; ++i) {
        const double t = cs[i] * hess[i][k] + sn[i] * hess[i + 1][k];
        hess[i + 1][k] = -sn[i] * hess[i][k] + cs[i] * hess[i + 1][k];
        hess[i][k] = t;
      }
      const double denom = std::hypot(hess[k][k], hess[k + 1][k]);
      cs[k] = hess[k][k] / denom;
      sn[k] = hess[k + 1][k] / denom;
      hess[k][k] = denom;
      hess[k + 1][k] = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = cs[k] * g[k];
      ++k;

      breakdown = after <= 1e-14 * before;
      if (use_true) {
        combine(k, candidate);
        current = true_residual_norm(a, b, candidate, work) / reference;
      } else {
        current = std::abs(g[k]) / reference;
      }
      stats.residual_history.push_back(current);
      if (current <= config.tol || breakdown) break;
      for (std::size_t i = 0; i < n; ++i) w[i] /= after;
    }

    combine(k, candidate);
    std::copy(candidate.begin(), candidate.end(), x.begin());

    a.apply(x, work);
    for (std::size_t i = 0; i < n; ++i) work[i] = b[i] - work[i];
    const double true_norm = norm2(work);
    apply_or_copy(precond, work, r);
    beta = norm2(r);
    current = use_true ? true_norm / reference : beta / reference;

    if (current <= config.tol) {
      stats.converged = true;
      done = true;
    } else if (stats.iterations >= config.max_iterations || beta == 0.0 ||
               (breakdown && k < m)) {
      done = true;
    } else {
      ++stats.restarts;
    }
  }
  stats.relative_residual = current;
  a.apply(x, work);
  for (std::size_t i = 0; i < n; ++i) work[i] = b[i] - work[i];
  stats.true_relative_residual = norm2(work) / bnorm;
  return stats;
}

}  // namespace wgporo
