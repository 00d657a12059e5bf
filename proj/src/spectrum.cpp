#include "wgporo/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

namespace wgporo {

namespace {

constexpr double kBoundTol = 1e-8;
constexpr double kNullThreshold = 1e-8;

int mesh_n(const AssembledBlocks& b) {
  return static_cast<int>(std::lround(std::pow(static_cast<double>(b.nel), 1.0 / b.dim)));
}

SpectralReport make_report(const AssembledBlocks& b, std::string tag) {
  SpectralReport r;
  r.tag = std::move(tag);
  r.dim = b.dim;
  r.n = mesh_n(b);
  r.lambda = b.params.lambda;
  r.eps = b.params.eps;
  r.c0 = b.params.c0;
  r.dt = b.params.dt;
  return r;
}

void set_spectrum(SpectralReport& r, const Eigen::VectorXd& values) {
  r.eigenvalues.assign(values.data(), values.data() + values.size());
  std::sort(r.eigenvalues.begin(), r.eigenvalues.end());
  r.min_eig = r.eigenvalues.empty() ? 0.0 : r.eigenvalues.front();
  r.max_eig = r.eigenvalues.empty() ? 0.0 : r.eigenvalues.back();
}

void add_check(SpectralReport& r, std::string name, double value, double limit,
               bool at_least = false) {
  const bool ok = at_least ? value >= limit : value <= limit;
  r.checks.push_back({std::move(name), value, limit, at_least, ok});
}

void finish(SpectralReport& r) {
  r.pass = std::all_of(r.checks.begin(), r.checks.end(),
                       [](const BoundCheck& c) { return c.pass; });
}

DenseMatrix symmetrized(const DenseMatrix& a) { return 0.5 * (a + a.transpose()); }

Eigen::VectorXd generalized_eigenvalues(const DenseMatrix& a, const DenseMatrix& b) {
  Eigen::GeneralizedSelfAdjointEigenSolver<DenseMatrix> es(symmetrized(a), symmetrized(b),
                                                           Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("spectrum: generalized eigensolver failed");
  }
  return es.eigenvalues();
}

double min_eigenvalue(const DenseMatrix& a) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(symmetrized(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues().size() ? es.eigenvalues()(0) : 0.0;
}

DenseMatrix dense_mp(const AssembledBlocks& b) {
  return Eigen::Map<const Eigen::VectorXd>(b.mp.data(), b.nel).asDiagonal();
}

/// B° A1^{-1} B°^T via the Cholesky factor of A1.
DenseMatrix dense_b_a1inv_bt(const AssembledBlocks& b) {
  const DenseMatrix a1 = to_dense(b.A1);
  Eigen::LLT<DenseMatrix> llt(a1);
  if (llt.info() != Eigen::Success) throw std::runtime_error("spectrum: A1 is not SPD");
  const DenseMatrix x = llt.matrixL().solve(to_dense(b.Bcirc).transpose());
  return x.transpose() * x;
}

/// Mp°^{-1/2} B° L^{-T} with A1 = L L^T; its singular values are those of
/// Mp°^{-1/2} B° A1^{-1/2}.
DenseMatrix dense_infsup_operator(const AssembledBlocks& b) {
  Eigen::LLT<DenseMatrix> llt(to_dense(b.A1));
  if (llt.info() != Eigen::Success) throw std::runtime_error("spectrum: A1 is not SPD");
  DenseMatrix x = llt.matrixL().solve(to_dense(b.Bcirc).transpose()).transpose();
  for (Index i = 0; i < b.nel; ++i) x.row(i) /= std::sqrt(b.mp[i]);
  return x;
}

Eigen::VectorXd singular_values(const DenseMatrix& a) {
  Eigen::BDCSVD<DenseMatrix> svd(a);
  return svd.singularValues();  // descending
}

double infsup_from(const Eigen::VectorXd& sv, InfSup& out) {
  out.sigma_max = sv.size() ? sv(0) : 0.0;
  out.near_zero = 0;
  out.beta = 0.0;
  const double threshold = kNullThreshold * out.sigma_max;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) < threshold) {
      ++out.near_zero;
    } else {
      out.beta = sv(i);
    }
  }
  return out.beta;
}

/// S~3 and its block bounds, all 2 nel x 2 nel.
struct ThreeFieldDense {
  DenseMatrix s3;
  DenseMatrix lower;
  DenseMatrix upper;
  DenseMatrix s3hat;
  DenseMatrix mp;
  DenseMatrix g;  ///< B° A1^{-1} B°^T
};

ThreeFieldDense three_field_dense(const AssembledBlocks& b) {
  const ProblemParams& pr = b.params;
  const Index m = b.nel;
  const double scale = pr.mu / (pr.alpha * pr.alpha);
  ThreeFieldDense t;
  t.mp = dense_mp(b);
  t.g = dense_b_a1inv_bt(b);
  const DenseMatrix dt = scale * dense_d_tilde(b);
  const DenseMatrix emp = pr.eps * t.mp;

  t.s3 = DenseMatrix::Zero(2 * m, 2 * m);
  t.s3.topLeftCorner(m, m) = dt + emp;
  t.s3.topRightCorner(m, m) = emp;
  t.s3.bottomLeftCorner(m, m) = emp;
  t.s3.bottomRightCorner(m, m) = emp + t.g;

  t.lower = DenseMatrix::Zero(2 * m, 2 * m);
  t.lower.topLeftCorner(m, m) = dt;

  t.upper = DenseMatrix::Zero(2 * m, 2 * m);
  t.upper.topLeftCorner(m, m) = 2.0 * (dt + emp);
  t.upper.bottomRightCorner(m, m) = (2.0 * pr.eps + b.dim) * t.mp;

  t.s3hat = DenseMatrix::Zero(2 * m, 2 * m);
  t.s3hat.topLeftCorner(m, m) = dt + emp;
  t.s3hat.bottomRightCorner(m, m) = t.mp;
  return t;
}

}  // namespace

DenseMatrix to_dense(const CsrMatrix& a) {
  DenseMatrix d = DenseMatrix::Zero(a.rows(), a.cols());
  const auto& rp = a.row_ptr();
  const auto& ci = a.col_idx();
  const auto& v = a.values();
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index k = rp[i]; k < rp[i + 1]; ++k) d(i, ci[k]) = v[k];
  }
  return d;
}

DenseMatrix dense_ap_schur(const AssembledBlocks& b) {
  const DenseMatrix ap = to_dense(b.Ap);
  const Index m = b.nel;
  const Index f = b.np - m;
  DenseMatrix s = ap.topLeftCorner(m, m);
  if (f > 0) {
    Eigen::LLT<DenseMatrix> llt(ap.bottomRightCorner(f, f));
    if (llt.info() != Eigen::Success) throw std::runtime_error("spectrum: Ap facet block not SPD");
    s -= ap.topRightCorner(m, f) * llt.solve(ap.bottomLeftCorner(f, m));
  }
  return symmetrized(s);
}

DenseMatrix dense_d_tilde(const AssembledBlocks& b) {
  return b.params.c0 * dense_mp(b) + (b.params.kappa * b.params.dt) * dense_ap_schur(b);
}

SpectralReport operator_inequality(const AssembledBlocks& b) {
  SpectralReport r = make_report(b, "A0A1");
  set_spectrum(r, generalized_eigenvalues(to_dense(b.A0_product()), to_dense(b.A1)));
  r.bound = b.dim + 1e-10;
  add_check(r, "max_eig", r.max_eig, r.bound);
  finish(r);
  return r;
}

SpectralReport dense_schur_two_field(const AssembledBlocks& b) {
  const ProblemParams& pr = b.params;
  SpectralReport r = make_report(b, "S2");
  const DenseMatrix bc = to_dense(b.Bcirc);
  const DenseMatrix k = pr.eps * to_dense(b.A1) + to_dense(b.A0_product());
  Eigen::LLT<DenseMatrix> llt(k);
  if (llt.info() != Eigen::Success) throw std::runtime_error("spectrum: eps A1 + A0 not SPD");
  const DenseMatrix x = llt.matrixL().solve(bc.transpose());
  const DenseMatrix dtil = dense_d_tilde(b);
  const double ratio = pr.eps / pr.mu;
  const double coupling = pr.alpha * pr.eps / pr.mu;
  const DenseMatrix s2 = ratio * dtil + coupling * coupling * (x.transpose() * x);
  set_spectrum(r, generalized_eigenvalues(s2, ratio * dtil));

  const double a2e = pr.alpha * pr.alpha * pr.eps;
  if (pr.c0 > 0.0) {
    r.bound = 1.0 + a2e / (pr.mu * pr.c0);
  } else {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(dense_ap_schur(b), Eigen::EigenvaluesOnly);
    const double mp_max = *std::max_element(b.mp.begin(), b.mp.end());
    r.bound = 1.0 + a2e * mp_max / (pr.mu * pr.kappa * pr.dt * es.eigenvalues()(0));
  }
  add_check(r, "min_eig", r.min_eig, 1.0 - kBoundTol, true);
  add_check(r, "max_eig", r.max_eig, r.bound + kBoundTol);
  finish(r);
  return r;
}

InfSup compute_infsup(const AssembledBlocks& b) {
  InfSup out;
  infsup_from(singular_values(dense_infsup_operator(b)), out);
  return out;
}

double compute_infsup_beta(const AssembledBlocks& b) {
  const InfSup s = compute_infsup(b);
  if (s.near_zero != 1) {
    throw std::runtime_error(
        "spectrum: expected one near-zero singular value of Mp^-1/2 B A1^-1/2, found " +
        std::to_string(s.near_zero));
  }
  return s.beta;
}

SpectralReport dense_schur_elasticity(const AssembledBlocks& b) {
  const double eps = b.params.eps;
  SpectralReport r = make_report(b, "S2e");
  const Eigen::VectorXd sv = singular_values(dense_infsup_operator(b));
  InfSup is;
  r.beta = infsup_from(sv, is);

  Eigen::VectorXd values(b.nu + b.nel);
  values.head(b.nu).setOnes();
  for (Index i = 0; i < b.nel; ++i) values(b.nu + i) = eps + sv(i) * sv(i);
  set_spectrum(r, values);
  r.bound = b.dim + eps + kBoundTol;

  const double split = 0.5 * (eps + r.beta * r.beta);
  const auto below = std::count_if(r.eigenvalues.begin(), r.eigenvalues.end(),
                                   [&](double v) { return v < split; });
  add_check(r, "min_eig_rel_dev", std::abs(r.min_eig - eps) / eps, kBoundTol);
  add_check(r, "count_below_split", static_cast<double>(below), 1.0);
  add_check(r, "count_below_split_min", static_cast<double>(below), 1.0, true);
  add_check(r, "max_eig", r.max_eig, r.bound);
  add_check(r, "nullity", static_cast<double>(is.near_zero), 1.0);
  add_check(r, "nullity_min", static_cast<double>(is.near_zero), 1.0, true);
  finish(r);
  return r;
}

SpectralReport dense_schur_three_field(const AssembledBlocks& b) {
  SpectralReport r = make_report(b, "S3");
  const ThreeFieldDense t = three_field_dense(b);
  set_spectrum(r, generalized_eigenvalues(t.s3, t.s3hat));
  r.bound = 0.0;
  add_check(r, "min_eig(upper - S3)", min_eigenvalue(t.upper - t.s3), -kBoundTol, true);
  add_check(r, "min_eig(S3 - lower)", min_eigenvalue(t.s3 - t.lower), -kBoundTol, true);
  finish(r);
  return r;
}

SpectralReport preconditioned_three_field(const AssembledBlocks& b) {
  const double eps = b.params.eps;
  SpectralReport r = make_report(b, "P3A3");
  const ThreeFieldDense t = three_field_dense(b);
  const Eigen::VectorXd schur = generalized_eigenvalues(t.s3, t.s3hat);
  Eigen::VectorXd values(b.nu + schur.size());
  values.head(b.nu).setOnes();
  values.tail(schur.size()) = schur;
  set_spectrum(r, values);
  InfSup is;
  r.beta = infsup_from(singular_values(dense_infsup_operator(b)), is);
  r.bound = b.dim + 10.0 * eps;

  const double outlier = 10.0 * eps;
  const auto small = std::count_if(r.eigenvalues.begin(), r.eigenvalues.end(),
                                   [&](double v) { return v <= outlier; });
  add_check(r, "count_outliers", static_cast<double>(small), 1.0);
  add_check(r, "count_outliers_min", static_cast<double>(small), 1.0, true);
  const double cluster_min = r.eigenvalues.size() > 1 ? r.eigenvalues[1] : 0.0;
  add_check(r, "cluster_min", cluster_min, r.beta * r.beta - 0.05, true);
  add_check(r, "max_eig", r.max_eig, r.bound);
  finish(r);
  return r;
}

SpectralReport three_field_limit(const AssembledBlocks& b) {
  SpectralReport r = make_report(b, "S3lim");
  const ThreeFieldDense t = three_field_dense(b);
  set_spectrum(r, generalized_eigenvalues(t.s3, t.s3hat));
  const Eigen::VectorXd g = generalized_eigenvalues(t.g, t.mp);
  std::vector<double> expected(b.nel, 1.0);
  expected.insert(expected.end(), g.data(), g.data() + g.size());
  std::sort(expected.begin(), expected.end());
  double dev = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    dev = std::max(dev, std::abs(expected[i] - r.eigenvalues[i]));
  }
  r.bound = 1e-4;
  add_check(r, "max_deviation", dev, r.bound);
  finish(r);
  return r;
}

DensePair dense_elasticity_pair(const AssembledBlocks& b) {
  const Index nu = b.nu;
  const Index m = b.nel;
  const DenseMatrix a1 = to_dense(b.A1);
  const DenseMatrix bc = to_dense(b.Bcirc);
  const DenseMatrix mp = dense_mp(b);
  DensePair d;
  d.a = DenseMatrix::Zero(nu + m, nu + m);
  d.a.topLeftCorner(nu, nu) = a1;
  d.a.topRightCorner(nu, m) = -bc.transpose();
  d.a.bottomLeftCorner(m, nu) = -bc;
  d.a.bottomRightCorner(m, m) = -b.params.eps * mp;
  d.p = d.a;
  d.p.bottomLeftCorner(m, nu).setZero();
  d.p.bottomRightCorner(m, m) = -mp;
  return d;
}

namespace {

DensePair two_field_pair(const AssembledBlocks& b, const DenseMatrix& bmat,
                         const DenseMatrix& dmat) {
  const ProblemParams& pr = b.params;
  const Index nu = b.nu;
  const Index m = bmat.rows();
  const double coupling = pr.alpha * pr.eps / pr.mu;
  DensePair d;
  d.a = DenseMatrix::Zero(nu + m, nu + m);
  d.a.topLeftCorner(nu, nu) = pr.eps * to_dense(b.A1) + to_dense(b.A0_product());
  d.a.topRightCorner(nu, m) = coupling * bmat.transpose();
  d.a.bottomLeftCorner(m, nu) = coupling * bmat;
  d.a.bottomRightCorner(m, m) = -(pr.eps / pr.mu) * dmat;
  d.p = d.a;
  d.p.bottomLeftCorner(m, nu).setZero();
  return d;
}

}  // namespace

DensePair dense_two_field_pair(const AssembledBlocks& b) {
  return two_field_pair(b, to_dense(b.B), to_dense(b.D));
}

DensePair dense_reduced_two_field_pair(const AssembledBlocks& b) {
  return two_field_pair(b, to_dense(b.Bcirc), dense_d_tilde(b));
}

DensePair dense_three_field_pair(const AssembledBlocks& b) {
  const ProblemParams& pr = b.params;
  const Index nu = b.nu;
  const Index np = b.np;
  const Index m = b.nel;
  const Index n = nu + np + m;
  const DenseMatrix bc = to_dense(b.Bcirc);
  const DenseMatrix mp = dense_mp(b);
  DensePair d;
  d.a = DenseMatrix::Zero(n, n);
  d.a.block(0, 0, nu, nu) = to_dense(b.A1);
  d.a.block(0, nu + np, nu, m) = -bc.transpose();
  d.a.block(nu, nu, np, np) = -(pr.mu / (pr.alpha * pr.alpha)) * to_dense(b.D_tilde2);
  d.a.block(nu, nu + np, m, m) = -pr.eps * mp;
  d.a.block(nu + np, 0, m, nu) = -bc;
  d.a.block(nu + np, nu, m, m) = -pr.eps * mp;
  d.a.block(nu + np, nu + np, m, m) = -pr.eps * mp;
  d.p = d.a;
  d.p.block(nu, nu + np, m, m).setZero();
  d.p.block(nu + np, 0, m, nu).setZero();
  d.p.block(nu + np, nu, m, m).setZero();
  d.p.block(nu + np, nu + np, m, m) = -mp;
  return d;
}

namespace {

using Complex = std::complex<double>;

bool complex_less(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

/// Diagonal similarity by powers of two that equalizes off-diagonal row and
/// column 1-norms; exact in floating point and leaves the spectrum unchanged.
DenseMatrix balanced(DenseMatrix m) {
  const Index n = m.rows();
  bool changed = true;
  for (int sweep = 0; changed && sweep < 100; ++sweep) {
    changed = false;
    for (Index i = 0; i < n; ++i) {
      const double c = m.col(i).cwiseAbs().sum() - std::abs(m(i, i));
      const double r = m.row(i).cwiseAbs().sum() - std::abs(m(i, i));
      if (c == 0.0 || r == 0.0) continue;
      double f = 1.0, cs = c, rs = r;
      while (cs < rs / 2) { cs *= 2; rs /= 2; f *= 2; }
      while (cs >= rs * 2) { cs /= 2; rs *= 2; f /= 2; }
      if (cs + rs < 0.95 * (c + r)) {
        m.row(i) /= f;
        m.col(i) *= f;
        changed = true;
      }
    }
  }
  return m;
}

std::vector<Complex> eigenvalues_of(const DenseMatrix& m) {
  Eigen::EigenSolver<DenseMatrix> es(balanced(m), false);
  if (es.info() != Eigen::Success) throw std::runtime_error("spectrum: eigensolver failed");
  std::vector<Complex> out(es.eigenvalues().data(),
                           es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end(), complex_less);
  return out;
}

/// Greedy nearest matching; both lists must have equal length.
double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
  double worst = 0.0;
  for (const Complex& x : a) {
    auto best = b.begin();
    for (auto it = b.begin(); it != b.end(); ++it) {
      if (std::abs(*it - x) < std::abs(*best - x)) best = it;
    }
    worst = std::max(worst, std::abs(*best - x));
    b.erase(best);
  }
  return worst;
}

DenseMatrix random_matrix(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  }
  return m;
}

/// SPD with eigenvalues in [1, 3].
DenseMatrix random_spd(std::mt19937_64& rng, Index n) {
  Eigen::HouseholderQR<DenseMatrix> qr(random_matrix(rng, n, n));
  const DenseMatrix q = qr.householderQ();
  std::uniform_real_distribution<double> u(1.0, 3.0);
  Eigen::VectorXd d(n);
  for (Index i = 0; i < n; ++i) d(i) = u(rng);
  return q * d.asDiagonal() * q.transpose();
}

/// Symmetric positive semidefinite of rank `rank`.
DenseMatrix random_psd(std::mt19937_64& rng, Index n, Index rank) {
  const DenseMatrix f = random_matrix(rng, n, rank) / std::sqrt(static_cast<double>(n));
  return f * f.transpose();
}

/// A diagonalizable matrix V diag(l) V^{-1} with V = I + 0.3 G / sqrt(n).
DenseMatrix random_diagonalizable(std::mt19937_64& rng, const std::vector<double>& l) {
  const Index n = static_cast<Index>(l.size());
  const DenseMatrix v =
      DenseMatrix::Identity(n, n) + 0.3 * random_matrix(rng, n, n) / std::sqrt(double(n));
  const Eigen::Map<const Eigen::VectorXd> lv(l.data(), n);
  return v * lv.asDiagonal() * v.inverse();
}

/// Distinct values in [0.5, 0.9] u [1.1, 1.5].
std::vector<double> random_spectrum(std::mt19937_64& rng, Index n) {
  std::vector<double> l(n);
  for (Index i = 0; i < n; ++i) {
    const double t = (i + 0.5) / static_cast<double>(n);
    l[i] = t < 0.5 ? 0.5 + 0.8 * t : 1.1 + 0.8 * (t - 0.5);
  }
  std::shuffle(l.begin(), l.end(), rng);
  return l;
}

struct Saddle {
  DenseMatrix a, bt, c, d;
};

DenseMatrix assemble(const Saddle& s) {
  const Index n1 = s.a.rows();
  const Index n2 = s.d.rows();
  DenseMatrix m(n1 + n2, n1 + n2);
  m << s.a, s.bt, s.c, -s.d;
  return m;
}

/// P_t^{-1} A with P_t = [A, B^T; 0, -S^].
DenseMatrix preconditioned(const Saddle& s, const DenseMatrix& shat) {
  const Index n1 = s.a.rows();
  const Index n2 = s.d.rows();
  DenseMatrix p = DenseMatrix::Zero(n1 + n2, n1 + n2);
  p.topLeftCorner(n1, n1) = s.a;
  p.topRightCorner(n1, n2) = s.bt;
  p.bottomRightCorner(n2, n2) = -shat;
  return p.partialPivLu().solve(assemble(s));
}

double condition_number(const DenseMatrix& m) {
  const Eigen::VectorXd sv = singular_values(m);
  return sv(0) / sv(sv.size() - 1);
}

DenseMatrix schur(const Saddle& s) { return s.d + s.c * s.a.llt().solve(s.bt); }

DenseMatrix poly(const DenseMatrix& m, const std::vector<double>& roots) {
  const Index n = m.rows();
  const DenseMatrix id = DenseMatrix::Identity(n, n);
  DenseMatrix out = m - id;
  for (double l : roots) out = out * (m - l * id);
  return out;
}

}  // namespace

std::vector<std::complex<double>> preconditioned_eigenvalues(const DensePair& pair) {
  return eigenvalues_of(pair.p.partialPivLu().solve(pair.a));
}

LemmaSuiteReport lemma_a1_suite(std::uint64_t seed, int trials) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> size(2, 6);
  LemmaSuiteReport r;
  r.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const Index n1 = size(rng);
    const Index n2 = size(rng);
    const std::vector<double> l = random_spectrum(rng, n2);

    // General C: S^ chosen so that S^^{-1} S has the prescribed spectrum l.
    // Redraw until S is well conditioned, so that errors measure the identity
    // rather than the conditioning of a random draw.
    Saddle s;
    DenseMatrix sm;
    do {
      s = Saddle{random_spd(rng, n1), random_matrix(rng, n1, n2) / std::sqrt(double(n1)),
                 random_matrix(rng, n2, n1) / std::sqrt(double(n1)),
                 random_psd(rng, n2, std::max<Index>(n2 / 2, n2 - n1 + 1))};
      sm = schur(s);
    } while (condition_number(sm) > 1e3);
    DenseMatrix shat = sm * random_diagonalizable(rng, l).inverse();
    DenseMatrix m = preconditioned(s, shat);
    {
      std::vector<Complex> expected(n1, Complex(1.0, 0.0));
      for (const Complex& z : eigenvalues_of(shat.partialPivLu().solve(sm))) expected.push_back(z);
      r.multiset_error =
          std::max(r.multiset_error, multiset_distance(eigenvalues_of(m), expected));
      const DenseMatrix q = poly(m, l);
      r.general_poly_error = std::max(r.general_poly_error, (q * q).norm());
    }

    // S^ = S: M satisfies (M - I)^2 = 0.
    {
      const DenseMatrix e = preconditioned(s, sm) - DenseMatrix::Identity(n1 + n2, n1 + n2);
      r.exact_schur_error = std::max(r.exact_schur_error, (e * e).norm());
    }

    // C = 0: (M - I) p(M) = 0 with p the minimal polynomial of S^^{-1} S.
    {
      Saddle z{s.a, s.bt, DenseMatrix::Zero(n2, n1), random_spd(rng, n2)};
      const DenseMatrix zs = schur(z);
      const DenseMatrix zhat = zs * random_diagonalizable(rng, l).inverse();
      r.c0_poly_error = std::max(r.c0_poly_error, poly(preconditioned(z, zhat), l).norm());
    }

    // Singular S with S^ = (S^+)^+: eig(S^^{-1} S) lie in {0, 1}.
    {
      const Index rank = std::max<Index>(1, n2 - 1 - static_cast<Index>(t % 2));
      const DenseMatrix bt = random_matrix(rng, n1, rank) * random_matrix(rng, rank, n2);
      Saddle y{s.a, bt, bt.transpose(), DenseMatrix::Zero(n2, n2)};
      const DenseMatrix ys = schur(y);
      Eigen::JacobiSVD<DenseMatrix> svd(ys, Eigen::ComputeFullU | Eigen::ComputeFullV);
      Eigen::VectorXd sig = svd.singularValues();
      const double cut = 1e-10 * sig(0);
      for (Index i = 0; i < sig.size(); ++i) {
        if (sig(i) < cut) sig(i) = 1.0;
      }
      const DenseMatrix yhat = svd.matrixU() * sig.asDiagonal() * svd.matrixV().transpose();
      for (const Complex& z : eigenvalues_of(yhat.partialPivLu().solve(ys))) {
        r.pinv_error =
            std::max(r.pinv_error, std::min(std::abs(z), std::abs(z - Complex(1.0, 0.0))));
      }
    }

    // ||C A^{-1} C^T||_2 equals the largest generalized eigenvalue of (C^T C, A).
    {
      const DenseMatrix cm = random_matrix(rng, n2, n1);
      const DenseMatrix cac = cm * s.a.llt().solve(cm.transpose());
      const double lhs = singular_values(cac)(0);
      const Eigen::VectorXd g = generalized_eigenvalues(cm.transpose() * cm, s.a);
      const double rhs = g(g.size() - 1);
      r.norm_identity_error = std::max(r.norm_identity_error, std::abs(lhs - rhs) / rhs);
    }
  }
  r.pass = r.multiset_error <= 1e-8 && r.exact_schur_error <= 1e-10 &&
           r.c0_poly_error <= 1e-8 && r.general_poly_error <= 1e-8 && r.pinv_error <= 1e-8 &&
           r.norm_identity_error <= 1e-8;
  return r;
}

std::string spectral_csv_header() { return "tag,n,lambda,c0,dt,min_eig,max_eig,bound,pass"; }

std::string to_csv_row(const SpectralReport& r) {
  std::string row = r.tag + ',' + std::to_string(r.n);
  for (double v : {r.lambda, r.c0, r.dt, r.min_eig, r.max_eig, r.bound}) row += ',' + shortest(v);
  return row + (r.pass ? ",1" : ",0");
}

void write_spectral_csv(std::ostream& out, const std::vector<SpectralReport>& reports) {
  out << spectral_csv_header() << '\n';
  for (const SpectralReport& r : reports) out << to_csv_row(r) << '\n';
}

}  // namespace wgporo
