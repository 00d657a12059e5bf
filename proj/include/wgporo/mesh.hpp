#pragma once

#include <array>
#include <vector>

#include "wgporo/sparse.hpp"

namespace wgporo {

using Point = std::array<double, 3>;

struct Element {
  Index index = 0;
  Point centroid{};
  /// Local facet order: -x, +x, -y, +y (, -z, +z).
  std::array<Index, 6> facets{};
  /// Sign of the global facet normal relative to the outward normal.
  std::array<int, 6> orientation{};
};

struct Facet {
  Index index = 0;
  Point midpoint{};
  double measure = 0.0;
  int axis = 0;  ///< global normal is the unit vector along this axis
  /// Adjacent elements ordered along the normal; -1 where outside the domain.
  std::array<Index, 2> elements{-1, -1};
  bool boundary = false;
};

/// Uniform axis-aligned mesh of the unit square (dim 2) or cube (dim 3).
/// Elements are numbered lexicographically with x fastest. Facets are
/// grouped by normal axis and lexicographic within each group.
class Mesh {
public:
  Mesh(int n, int dim);

  int dim() const { return dim_; }
  int n() const { return n_; }
  double h() const { return h_; }
  double element_measure() const;
  double facet_measure() const;

  const std::vector<Element>& elements() const { return elements_; }
  const std::vector<Facet>& facets() const { return facets_; }
  Index num_elements() const { return static_cast<Index>(elements_.size()); }
  Index num_facets() const { return static_cast<Index>(facets_.size()); }
  Index num_boundary_facets() const { return num_boundary_; }
  int facets_per_element() const { return 2 * dim_; }

  /// Outward unit normal of local facet `local` (0..2*dim-1).
  static Point local_normal(int local);

private:
  int n_;
  int dim_;
  double h_;
  std::vector<Element> elements_;
  std::vector<Facet> facets_;
  Index num_boundary_ = 0;
};

Mesh build_mesh(int n, int dim);

/// Degree-of-freedom numbering for the weak function spaces.
///
/// Scalar field: element interiors first (one per element), then the
/// interior facets. Vector field: the scalar numbering with `dim`
/// interleaved components, so vector dof = dim*scalar_dof + component.
/// Boundary facet dofs are constrained and numbered separately.
class DofMap {
public:
  explicit DofMap(const Mesh& mesh);

  int dim() const { return dim_; }
  Index num_elements() const { return num_elements_; }
  Index num_free_facets() const { return num_free_facets_; }
  Index num_boundary_facets() const { return num_boundary_facets_; }

  Index scalar_size() const { return num_elements_ + num_free_facets_; }
  Index vector_size() const { return dim_ * scalar_size(); }
  Index scalar_boundary_size() const { return num_boundary_facets_; }
  Index vector_boundary_size() const { return dim_ * num_boundary_facets_; }

  Index interior_dof(Index element) const { return element; }
  /// Free scalar dof of a facet, or -1 if it lies on the boundary.
  Index facet_dof(Index facet) const;
  /// Boundary numbering of a facet, or -1 if it is interior.
  Index boundary_index(Index facet) const { return boundary_index_[facet]; }
  Index boundary_facet(Index boundary) const { return boundary_facets_[boundary]; }

  /// Scalar index sets for the interior / facet partition of pressure.
  std::vector<Index> interior_set() const;
  std::vector<Index> facet_set() const;

private:
  int dim_;
  Index num_elements_;
  Index num_free_facets_ = 0;
  Index num_boundary_facets_ = 0;
  std::vector<Index> free_index_;
  std::vector<Index> boundary_index_;
  std::vector<Index> boundary_facets_;
};

DofMap build_dof_maps(const Mesh& mesh);

}  // namespace wgporo
