#include "wgporo/mesh.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace wgporo {

Mesh::Mesh(int n, int dim) : n_(n), dim_(dim) {
  if (n < 1) throw std::invalid_argument("mesh: n must be positive");
  if (dim != 2 && dim != 3) throw std::invalid_argument("mesh: dim must be 2 or 3");
  h_ = 1.0 / n;
  const Index nz = dim == 3 ? n : 1;
  const Index num_el = static_cast<Index>(n) * n * nz;

  // Facets normal to `axis` are indexed by a position 0..n along the axis
  // and cell positions 0..n-1 along the others, lexicographic with x fastest.
  std::array<Index, 3> offset{};
  std::array<std::array<Index, 3>, 3> extent{};
  Index total = 0;
  for (int axis = 0; axis < dim; ++axis) {
    offset[axis] = total;
    Index count = 1;
    for (int k = 0; k < dim; ++k) {
      extent[axis][k] = (k == axis) ? n + 1 : n;
      count *= extent[axis][k];
    }
    total += count;
  }
  auto facet_id = [&](int axis, std::array<Index, 3> pos) {
    Index id = 0, stride = 1;
    for (int k = 0; k < dim; ++k) {
      id += pos[k] * stride;
      stride *= extent[axis][k];
    }
    return offset[axis] + id;
  };

  facets_.resize(static_cast<std::size_t>(total));
  for (int axis = 0; axis < dim; ++axis) {
    const Index nx = extent[axis][0], ny = extent[axis][1], nzz = dim == 3 ? extent[axis][2] : 1;
    for (Index k = 0; k < nzz; ++k)
      for (Index j = 0; j < ny; ++j)
        for (Index i = 0; i < nx; ++i) {
          std::array<Index, 3> pos{i, j, k};
          Facet& f = facets_[facet_id(axis, pos)];
          f.index = facet_id(axis, pos);
          f.axis = axis;
          f.measure = std::pow(h_, dim - 1);
          for (int c = 0; c < dim; ++c)
            f.midpoint[c] = (c == axis) ? pos[c] * h_ : (pos[c] + 0.5) * h_;
          auto element_at = [&](std::array<Index, 3> e) -> Index {
            for (int c = 0; c < dim; ++c)
              if (e[c] < 0 || e[c] >= n) return -1;
            return e[0] + n * (e[1] + (dim == 3 ? n * e[2] : 0));
          };
          auto lower = pos;
          lower[axis] -= 1;
          f.elements = {element_at(lower), element_at(pos)};
          f.boundary = f.elements[0] < 0 || f.elements[1] < 0;
          if (f.boundary) ++num_boundary_;
        }
  }

  elements_.resize(static_cast<std::size_t>(num_el));
  for (Index k = 0; k < nz; ++k)
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i) {
        const Index e = i + n * (j + n * k);
        Element& el = elements_[e];
        el.index = e;
        const std::array<Index, 3> pos{i, j, k};
        for (int c = 0; c < dim; ++c) el.centroid[c] = (pos[c] + 0.5) * h_;
        for (int axis = 0; axis < dim; ++axis) {
          auto lo = pos;
          auto hi = pos;
          hi[axis] += 1;
          el.facets[2 * axis] = facet_id(axis, lo);
          el.facets[2 * axis + 1] = facet_id(axis, hi);
          el.orientation[2 * axis] = -1;
          el.orientation[2 * axis + 1] = 1;
        }
      }
}

double Mesh::element_measure() const { return std::pow(h_, dim_); }
double Mesh::facet_measure() const { return std::pow(h_, dim_ - 1); }

Point Mesh::local_normal(int local) {
  Point p{0.0, 0.0, 0.0};
  p[local / 2] = (local % 2 == 0) ? -1.0 : 1.0;
  return p;
}

Mesh build_mesh(int n, int dim) { return Mesh(n, dim); }

DofMap::DofMap(const Mesh& mesh)
    : dim_(mesh.dim()), num_elements_(mesh.num_elements()) {
  free_index_.assign(static_cast<std::size_t>(mesh.num_facets()), -1);
  boundary_index_.assign(static_cast<std::size_t>(mesh.num_facets()), -1);
  for (const Facet& f : mesh.facets()) {
    if (f.boundary) {
      boundary_index_[f.index] = num_boundary_facets_++;
      boundary_facets_.push_back(f.index);
    } else {
      free_index_[f.index] = num_free_facets_++;
    }
  }
}

Index DofMap::facet_dof(Index facet) const {
  const Index k = free_index_[facet];
  return k < 0 ? -1 : num_elements_ + k;
}

std::vector<Index> DofMap::interior_set() const {
  std::vector<Index> s(static_cast<std::size_t>(num_elements_));
  std::iota(s.begin(), s.end(), Index{0});
  return s;
}

std::vector<Index> DofMap::facet_set() const {
  std::vector<Index> s(static_cast<std::size_t>(num_free_facets_));
  std::iota(s.begin(), s.end(), num_elements_);
  return s;
}

DofMap build_dof_maps(const Mesh& mesh) { return DofMap(mesh); }

}  // namespace wgporo
