#include <gtest/gtest.h>

#include <stdexcept>

#include "wgporo/mesh.hpp"

namespace wgporo {
namespace {

TEST(Mesh, CountsMatchClosedForms) {
  for (int dim : {2, 3})
    for (int n = 1; n <= (dim == 2 ? 64 : 16); n = n < 4 ? n + 1 : 2 * n) {
      const Mesh m(n, dim);
      const Index nd1 = dim == 2 ? n : Index{n} * n;
      EXPECT_EQ(m.num_elements(), nd1 * n);
      EXPECT_EQ(m.num_facets(), dim * nd1 * (n + 1));
      EXPECT_EQ(m.num_boundary_facets(), 2 * dim * nd1);
    }
}

TEST(Mesh, SquareEightByEight) {
  const Mesh m = build_mesh(8, 2);
  EXPECT_EQ(m.num_elements(), 64);
  EXPECT_EQ(m.num_facets(), 144);
  EXPECT_EQ(m.num_boundary_facets(), 32);
  EXPECT_EQ(m.num_facets() - m.num_boundary_facets(), 112);
}

TEST(Mesh, CubeTwoByTwo) {
  const Mesh m = build_mesh(2, 3);
  EXPECT_EQ(m.num_elements(), 8);
  EXPECT_EQ(m.num_facets(), 36);
  EXPECT_EQ(m.num_boundary_facets(), 24);
}

TEST(Mesh, SingleElementHasOnlyBoundaryFacets) {
  const Mesh m = build_mesh(1, 2);
  EXPECT_EQ(m.num_elements(), 1);
  EXPECT_EQ(m.num_facets(), 4);
  EXPECT_EQ(m.num_boundary_facets(), 4);
}

TEST(Mesh, RejectsInvalidArguments) {
  EXPECT_THROW(build_mesh(0, 2), std::invalid_argument);
  EXPECT_THROW(build_mesh(-1, 2), std::invalid_argument);
  EXPECT_THROW(build_mesh(4, 1), std::invalid_argument);
  EXPECT_THROW(build_mesh(4, 4), std::invalid_argument);
}

TEST(Mesh, FacetAdjacency) {
  for (int dim : {2, 3}) {
    const Mesh m(4, dim);
    for (const Facet& f : m.facets()) {
      const int inside = (f.elements[0] >= 0) + (f.elements[1] >= 0);
      EXPECT_EQ(inside, f.boundary ? 1 : 2);
      EXPECT_NEAR(f.measure, m.facet_measure(), 1e-15);
    }
  }
}

TEST(Mesh, ElementBoundaryIsClosed) {
  for (int dim : {2, 3}) {
    const Mesh m(dim == 2 ? 8 : 4, dim);
    for (const Element& e : m.elements()) {
      Point sum{};
      for (int lf = 0; lf < m.facets_per_element(); ++lf) {
        const Facet& f = m.facets()[e.facets[lf]];
        const Point nrm = Mesh::local_normal(lf);
        for (int c = 0; c < 3; ++c) sum[c] += f.measure * nrm[c];
        // The global normal is +axis; the stored orientation relates it to the outward one.
        EXPECT_DOUBLE_EQ(e.orientation[lf] * 1.0, nrm[f.axis]);
      }
      for (double s : sum) EXPECT_NEAR(s, 0.0, 1e-15);
    }
  }
}

TEST(Mesh, FacetMidpointsLieOnElementBoundary) {
  const Mesh m(4, 3);
  for (const Element& e : m.elements())
    for (int lf = 0; lf < 6; ++lf) {
      const Facet& f = m.facets()[e.facets[lf]];
      const Point nrm = Mesh::local_normal(lf);
      for (int c = 0; c < 3; ++c)
        EXPECT_NEAR(f.midpoint[c], e.centroid[c] + 0.5 * m.h() * nrm[c], 1e-14);
    }
}

TEST(DofMap, Counts) {
  const DofMap d8(build_mesh(8, 2));
  EXPECT_EQ(d8.scalar_size(), 176);
  EXPECT_EQ(d8.vector_size(), 352);
  const DofMap d1(build_mesh(1, 2));
  EXPECT_EQ(d1.scalar_size(), 1);
  EXPECT_EQ(d1.vector_size(), 2);
  const DofMap d3 = build_dof_maps(build_mesh(2, 3));
  EXPECT_EQ(d3.scalar_size(), 20);
  EXPECT_EQ(d3.vector_size(), 60);
}

TEST(DofMap, InteriorFirstAndBoundaryFlagged) {
  const Mesh m(4, 2);
  const DofMap d(m);
  for (Index e = 0; e < m.num_elements(); ++e) EXPECT_EQ(d.interior_dof(e), e);
  Index nb = 0;
  for (const Facet& f : m.facets()) {
    if (f.boundary) {
      EXPECT_EQ(d.facet_dof(f.index), -1);
      EXPECT_EQ(d.boundary_facet(d.boundary_index(f.index)), f.index);
      ++nb;
    } else {
      EXPECT_GE(d.facet_dof(f.index), m.num_elements());
      EXPECT_EQ(d.boundary_index(f.index), -1);
    }
  }
  EXPECT_EQ(nb, d.num_boundary_facets());
  EXPECT_EQ(static_cast<Index>(d.interior_set().size()), m.num_elements());
  EXPECT_EQ(static_cast<Index>(d.facet_set().size()), d.num_free_facets());
}

}  // namespace
}  // namespace wgporo
