#include "wgporo/wg_local.hpp"

#include <cmath>
#include <stdexcept>

#include "wgporo/quadrature.hpp"

namespace wgporo {

LocalBasis::LocalBasis(double h, int dim) : h_(h), dim_(dim) {
  if (!(h > 0.0)) throw std::invalid_argument("local basis: h must be positive");
  if (dim != 2 && dim != 3) throw std::invalid_argument("local basis: dim must be 2 or 3");
  const int m = size();
  gram_ = Eigen::MatrixXd::Zero(m, m);
  const Point origin{0.0, 0.0, 0.0};
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      const double v = quadrature::integrate_cell(origin, h, dim, [&](const Point& x) {
        const Point va = value(a, x), vb = value(b, x);
        return va[0] * vb[0] + va[1] * vb[1] + va[2] * vb[2];
      });
      gram_(a, b) = v;
      gram_(b, a) = v;
    }
}

Point LocalBasis::value(int k, const Point& x) const {
  const double s = 1.0 / h_;
  if (k < dim_) {
    Point e{0.0, 0.0, 0.0};
    e[k] = 1.0;
    return e;
  }
  if (k == dim_) return {s * x[0], s * x[1], dim_ == 3 ? s * x[2] : 0.0};
  // Affine diagonal map: the Piola image of [x^, -y^] is proportional to
  // [X, -Y]; of [0, y^, -z^] to [0, Y, -Z].
  if (k == dim_ + 1) return {s * x[0], -s * x[1], 0.0};
  if (dim_ == 3 && k == 5) return {0.0, s * x[1], -s * x[2]};
  throw std::out_of_range("local basis index");
}

double LocalBasis::divergence(int k) const {
  if (k < 0 || k >= size()) throw std::out_of_range("local basis index");
  return k == dim_ ? dim_ / h_ : 0.0;
}

LocalBasis local_basis(double h, int dim) { return LocalBasis(h, dim); }

Eigen::MatrixXd weak_gradient_scalar(const LocalBasis& basis) {
  const int d = basis.dim();
  const int m = basis.size();
  const int slots = 1 + 2 * d;
  const double h = basis.h();
  const double volume = std::pow(h, d);

  // rhs(k, s) = <phi_s, w_k . n>_{dE} - (phi_s, div w_k)_E for unit dof s.
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(m, slots);
  for (int k = 0; k < m; ++k) {
    rhs(k, 0) = -basis.divergence(k) * volume;
    for (int f = 0; f < 2 * d; ++f) {
      const Point n = Mesh::local_normal(f);
      const int axis = f / 2;
      Point center{0.0, 0.0, 0.0};
      center[axis] = n[axis] * 0.5 * h;
      rhs(k, 1 + f) = quadrature::integrate_face(center, h, d, axis, [&](const Point& x) {
        const Point w = basis.value(k, x);
        return w[0] * n[0] + w[1] * n[1] + w[2] * n[2];
      });
    }
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(basis.gram());
  if (llt.info() != Eigen::Success) throw std::runtime_error("singular local Gram matrix");
  return llt.solve(rhs);
}

Eigen::MatrixXd weak_gradient_vector(const LocalBasis& basis) {
  const int d = basis.dim();
  const int m = basis.size();
  const int slots = 1 + 2 * d;
  const Eigen::MatrixXd gs = weak_gradient_scalar(basis);
  Eigen::MatrixXd gv = Eigen::MatrixXd::Zero(d * m, d * slots);
  for (int c = 0; c < d; ++c)
    for (int k = 0; k < m; ++k)
      for (int s = 0; s < slots; ++s) gv(c * m + k, s * d + c) = gs(k, s);
  return gv;
}

Eigen::RowVectorXd weak_divergence(const LocalBasis& basis) {
  // Tested against constants only, so the interior term drops out:
  // div_w v = (1/|E|) sum_f |e| v_f . n_f.
  const int d = basis.dim();
  const double h = basis.h();
  const double ratio = std::pow(h, d - 1) / std::pow(h, d);
  Eigen::RowVectorXd dv = Eigen::RowVectorXd::Zero(d * (1 + 2 * d));
  for (int f = 0; f < 2 * d; ++f) {
    const Point n = Mesh::local_normal(f);
    for (int c = 0; c < d; ++c) dv((1 + f) * d + c) = ratio * n[c];
  }
  return dv;
}

LocalWeakOps local_weak_ops(const LocalBasis& basis) {
  const int d = basis.dim();
  LocalWeakOps ops;
  ops.scalar_gradient = weak_gradient_scalar(basis);
  ops.vector_gradient = weak_gradient_vector(basis);
  ops.divergence = weak_divergence(basis);
  const Eigen::MatrixXd& g = basis.gram();
  ops.scalar_stiffness = ops.scalar_gradient.transpose() * g * ops.scalar_gradient;
  Eigen::MatrixXd block_gram = Eigen::MatrixXd::Zero(d * basis.size(), d * basis.size());
  for (int c = 0; c < d; ++c)
    block_gram.block(c * basis.size(), c * basis.size(), basis.size(), basis.size()) = g;
  ops.vector_stiffness = ops.vector_gradient.transpose() * block_gram * ops.vector_gradient;
  // Exact symmetry keeps the assembled blocks symmetric bit-for-bit.
  ops.scalar_stiffness = 0.5 * (ops.scalar_stiffness + ops.scalar_stiffness.transpose()).eval();
  ops.vector_stiffness = 0.5 * (ops.vector_stiffness + ops.vector_stiffness.transpose()).eval();
  return ops;
}

}  // namespace wgporo
