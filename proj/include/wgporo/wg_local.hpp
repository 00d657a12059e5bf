#pragma once

#include <Eigen/Dense>

#include "wgporo/mesh.hpp"

namespace wgporo {

/// Lowest-order Arbogast-Correa (2D) / Arbogast-Tao (3D) space on one
/// element of side h, in coordinates X = x - x_E relative to the centroid.
///
/// Ordering: the dim constant unit vectors, then [X,Y(,Z)]/h, then the
/// Piola images of [x,-y] (and [0,y,-z] in 3D), also scaled by 1/h so
/// every Gram entry scales like h^dim.
class LocalBasis {
public:
  LocalBasis(double h, int dim);

  int dim() const { return dim_; }
  int size() const { return dim_ == 2 ? 4 : 6; }
  double h() const { return h_; }

  Point value(int k, const Point& offset) const;
  double divergence(int k) const;
  const Eigen::MatrixXd& gram() const { return gram_; }

private:
  double h_;
  int dim_;
  Eigen::MatrixXd gram_;
};

LocalBasis local_basis(double h, int dim);

/// Local dof layout: slot 0 is the element interior, slot 1+f is local
/// facet f (order -x,+x,-y,+y,-z,+z). Vector dofs interleave components:
/// local index = slot*dim + component.
struct LocalWeakOps {
  Eigen::MatrixXd scalar_gradient;  ///< m x (1+2d): dofs -> basis coefficients
  Eigen::MatrixXd vector_gradient;  ///< d*m x d*(1+2d): row r of grad uses coeffs r*m..r*m+m-1
  Eigen::RowVectorXd divergence;    ///< 1 x d*(1+2d)
  Eigen::MatrixXd scalar_stiffness; ///< (grad_w p, grad_w q)_E
  Eigen::MatrixXd vector_stiffness; ///< (grad_w u, grad_w v)_E
};

Eigen::MatrixXd weak_gradient_scalar(const LocalBasis& basis);
Eigen::MatrixXd weak_gradient_vector(const LocalBasis& basis);
Eigen::RowVectorXd weak_divergence(const LocalBasis& basis);

LocalWeakOps local_weak_ops(const LocalBasis& basis);

}  // namespace wgporo
