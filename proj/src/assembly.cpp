#include "wgporo/assembly.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "wgporo/quadrature.hpp"
#include "wgporo/wg_local.hpp"

namespace wgporo {

namespace {

/// Global position of a local scalar slot: free index, or boundary index
/// flagged by `boundary`.
struct SlotDof {
  Index index;
  bool boundary;
};

SlotDof slot_dof(const DofMap& dofs, const Element& el, int slot) {
  if (slot == 0) return {dofs.interior_dof(el.index), false};
  const Index facet = el.facets[slot - 1];
  const Index free = dofs.facet_dof(facet);
  if (free >= 0) return {free, false};
  return {dofs.boundary_index(facet), true};
}

CsrMatrix interior_mass(const Vector& mp, Index np, double scale) {
  std::vector<Triplet> t;
  t.reserve(mp.size());
  for (std::size_t i = 0; i < mp.size(); ++i)
    t.push_back({static_cast<Index>(i), static_cast<Index>(i), scale * mp[i]});
  return CsrMatrix::from_triplets(np, np, std::move(t));
}

}  // namespace

CsrMatrix AssembledBlocks::A0_product() const {
  Vector inv(mp.size());
  for (std::size_t i = 0; i < mp.size(); ++i) inv[i] = 1.0 / mp[i];
  return multiply(Bcirc.transpose(), multiply(CsrMatrix::diagonal(inv), Bcirc));
}

void AssembledBlocks::apply_A0(std::span<const double> x, std::span<double> y) const {
  Vector t(static_cast<std::size_t>(nel));
  Bcirc.multiply(x, t);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] /= mp[i];
  Bcirc.multiply_transpose(t, y);
}

AssembledBlocks assemble_blocks(const Mesh& mesh, const DofMap& dofs, const ProblemParams& params) {
  params.validate();
  if (params.dim != mesh.dim()) throw std::invalid_argument("assemble: dimension mismatch");
  const int d = mesh.dim();
  const int slots = 1 + 2 * d;
  const LocalBasis basis(mesh.h(), d);
  const LocalWeakOps ops = local_weak_ops(basis);
  const double volume = mesh.element_measure();

  AssembledBlocks blk;
  blk.params = params;
  blk.dim = d;
  blk.nu = dofs.vector_size();
  blk.np = dofs.scalar_size();
  blk.nel = dofs.num_elements();

  std::vector<Triplet> a1, a1b, ap, apb, bc, bcb, a0;
  std::vector<SlotDof> map(static_cast<std::size_t>(slots));
  for (const Element& el : mesh.elements()) {
    for (int s = 0; s < slots; ++s) map[s] = slot_dof(dofs, el, s);

    for (int r = 0; r < slots; ++r) {
      if (map[r].boundary) continue;
      for (int c = 0; c < slots; ++c) {
        const double v = ops.scalar_stiffness(r, c);
        if (v == 0.0) continue;
        (map[c].boundary ? apb : ap).push_back({map[r].index, map[c].index, v});
      }
    }

    for (int r = 0; r < slots * d; ++r) {
      const SlotDof row = map[r / d];
      if (row.boundary) continue;
      const Index gr = d * row.index + r % d;
      for (int c = 0; c < slots * d; ++c) {
        const double v = ops.vector_stiffness(r, c);
        if (v == 0.0) continue;
        const SlotDof col = map[c / d];
        const Index gc = d * col.index + c % d;
        (col.boundary ? a1b : a1).push_back({gr, gc, v});
      }
    }

    // B° = -|E| Dv; A0 = |E| Dv^T Dv.
    for (int c = 0; c < slots * d; ++c) {
      const double v = ops.divergence(c);
      if (v == 0.0) continue;
      const SlotDof col = map[c / d];
      const Index gc = d * col.index + c % d;
      (col.boundary ? bcb : bc).push_back({el.index, gc, -volume * v});
      if (col.boundary) continue;
      for (int r = 0; r < slots * d; ++r) {
        const double w = ops.divergence(r);
        const SlotDof row = map[r / d];
        if (w == 0.0 || row.boundary) continue;
        a0.push_back({d * row.index + r % d, gc, volume * w * v});
      }
    }
  }

  const Index nub = dofs.vector_boundary_size();
  const Index npb = dofs.scalar_boundary_size();
  blk.A1 = CsrMatrix::from_triplets(blk.nu, blk.nu, std::move(a1));
  blk.A1_bnd = CsrMatrix::from_triplets(blk.nu, nub, std::move(a1b));
  blk.Ap = CsrMatrix::from_triplets(blk.np, blk.np, std::move(ap));
  blk.Ap_bnd = CsrMatrix::from_triplets(blk.np, npb, std::move(apb));
  blk.Bcirc = CsrMatrix::from_triplets(blk.nel, blk.nu, bc);
  blk.Bcirc_bnd = CsrMatrix::from_triplets(blk.nel, nub, std::move(bcb));
  blk.A0_direct = CsrMatrix::from_triplets(blk.nu, blk.nu, std::move(a0));
  blk.B = CsrMatrix::from_triplets(blk.np, blk.nu, std::move(bc));
  blk.mp.assign(static_cast<std::size_t>(blk.nel), volume);
  blk.Mp = CsrMatrix::diagonal(blk.mp);

  const double kdt = params.kappa * params.dt;
  blk.D = add(1.0, interior_mass(blk.mp, blk.np, params.c0), kdt, blk.Ap);
  blk.D_tilde2 = add(1.0, blk.D, params.alpha * params.alpha * params.eps / params.mu,
                     interior_mass(blk.mp, blk.np, 1.0));
  return blk;
}

TimeState TimeState::zero(const DofMap& dofs) {
  return {Vector(static_cast<std::size_t>(dofs.vector_size()), 0.0),
          Vector(static_cast<std::size_t>(dofs.vector_boundary_size()), 0.0),
          Vector(static_cast<std::size_t>(dofs.scalar_size()), 0.0)};
}

DirichletValues project_dirichlet(const Mesh& mesh, const DofMap& dofs,
                                  const ProblemInstance& problem, double t) {
  const int d = mesh.dim();
  DirichletValues values;
  values.u.assign(static_cast<std::size_t>(dofs.vector_boundary_size()), 0.0);
  if (problem.has_pressure())
    values.p.assign(static_cast<std::size_t>(dofs.scalar_boundary_size()), 0.0);
  const double inv = 1.0 / mesh.facet_measure();
  for (Index b = 0; b < dofs.num_boundary_facets(); ++b) {
    const Facet& f = mesh.facets()[dofs.boundary_facet(b)];
    for (int c = 0; c < d; ++c)
      values.u[d * b + c] = inv * quadrature::integrate_face(f.midpoint, mesh.h(), d, f.axis,
                                                             [&](const Point& x) {
                                                               return problem.displacement_bc(x, t)[c];
                                                             });
    if (problem.has_pressure())
      values.p[b] = inv * quadrature::integrate_face(f.midpoint, mesh.h(), d, f.axis,
                                                     [&](const Point& x) {
                                                       return problem.pressure_bc(x, t);
                                                     });
  }
  return values;
}

RightHandSide assemble_rhs(const Mesh& mesh, const DofMap& dofs, const AssembledBlocks& blocks,
                           const ProblemInstance& problem, double t, const TimeState* prev) {
  const int d = mesh.dim();
  const ProblemParams& prm = blocks.params;
  RightHandSide rhs{Vector(static_cast<std::size_t>(blocks.nu), 0.0),
                    Vector(static_cast<std::size_t>(blocks.np), 0.0)};
  for (const Element& el : mesh.elements()) {
    for (int c = 0; c < d; ++c)
      rhs.b1[d * dofs.interior_dof(el.index) + c] = quadrature::integrate_cell(
          el.centroid, mesh.h(), d, [&](const Point& x) { return problem.forcing(x, t)[c]; });
    if (problem.has_pressure())
      rhs.b2[el.index] = -prm.dt * quadrature::integrate_cell(el.centroid, mesh.h(), d,
                                                              [&](const Point& x) {
                                                                return problem.source(x, t);
                                                              });
  }
  if (prev != nullptr && problem.has_pressure()) {
    // -alpha (div_w u^{n-1}, q°) = alpha B° u^{n-1}, boundary values included.
    std::span<double> b2i(rhs.b2.data(), static_cast<std::size_t>(blocks.nel));
    blocks.Bcirc.multiply_add(prm.alpha, prev->u, b2i);
    blocks.Bcirc_bnd.multiply_add(prm.alpha, prev->u_boundary, b2i);
    for (Index e = 0; e < blocks.nel; ++e) rhs.b2[e] -= prm.c0 * blocks.mp[e] * prev->p[e];
  }
  return rhs;
}

void apply_dirichlet(const AssembledBlocks& blocks, const DirichletValues& values,
                     bool with_pressure, RightHandSide& rhs) {
  const ProblemParams& prm = blocks.params;
  // b1 -= mu A1_b u_b + (lambda + mu) B°^T Mp°^{-1} B°_b u_b
  blocks.A1_bnd.multiply_add(-prm.mu, values.u, rhs.b1);
  Vector t(static_cast<std::size_t>(blocks.nel));
  blocks.Bcirc_bnd.multiply(values.u, t);
  Vector div(t);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] /= blocks.mp[i];
  Vector lift(static_cast<std::size_t>(blocks.nu));
  blocks.Bcirc.multiply_transpose(t, lift);
  axpy(-(prm.lambda + prm.mu), lift, rhs.b1);
  if (!with_pressure) return;
  // b2° -= alpha B°_b u_b;  b2 += kappa dt Ap_b p_b
  for (Index e = 0; e < blocks.nel; ++e) rhs.b2[e] -= prm.alpha * div[e];
  blocks.Ap_bnd.multiply_add(prm.kappa * prm.dt, values.p, rhs.b2);
}

Vector interpolate_interior(const Mesh& mesh, const VectorField& u, double t) {
  const int d = mesh.dim();
  const double inv = 1.0 / mesh.element_measure();
  Vector out(static_cast<std::size_t>(d * mesh.num_elements()));
  for (const Element& el : mesh.elements())
    for (int c = 0; c < d; ++c)
      out[d * el.index + c] = inv * quadrature::integrate_cell(
                                        el.centroid, mesh.h(), d,
                                        [&](const Point& x) { return u(x, t)[c]; });
  return out;
}

BlockSystem build_elasticity(const AssembledBlocks& blocks, const RightHandSide& rhs) {
  const AssembledBlocks* b = &blocks;
  const double eps = blocks.params.eps;
  BlockSystem sys;
  sys.block_sizes = {blocks.nu};
  sys.op = {blocks.nu, [b, eps](std::span<const double> x, std::span<double> y) {
              b->apply_A0(x, y);
              b->A1.multiply_add(eps, x, y);
            }};
  sys.rhs = rhs.b1;
  for (double& v : sys.rhs) v /= blocks.params.lambda + blocks.params.mu;
  return sys;
}

BlockSystem build_elasticity_saddle(const AssembledBlocks& blocks, const RightHandSide& rhs) {
  const AssembledBlocks* b = &blocks;
  const double eps = blocks.params.eps;
  const auto nu = static_cast<std::size_t>(blocks.nu);
  const auto nel = static_cast<std::size_t>(blocks.nel);
  BlockSystem sys;
  sys.block_sizes = {blocks.nu, blocks.nel};
  sys.op = {blocks.nu + blocks.nel,
            [b, eps, nu, nel](std::span<const double> x, std::span<double> y) {
              const auto x1 = x.subspan(0, nu), x2 = x.subspan(nu, nel);
              auto y1 = y.subspan(0, nu), y2 = y.subspan(nu, nel);
              Vector t(nu);
              b->A1.multiply(x1, y1);
              b->Bcirc.multiply_transpose(x2, t);
              axpy(-1.0, t, y1);
              b->Bcirc.multiply(x1, y2);
              for (std::size_t i = 0; i < nel; ++i) y2[i] = -y2[i] - eps * b->mp[i] * x2[i];
            }};
  sys.rhs.assign(nu + nel, 0.0);
  const double s = 1.0 / (blocks.params.lambda + blocks.params.mu);
  for (std::size_t i = 0; i < nu; ++i) sys.rhs[i] = s * rhs.b1[i];
  return sys;
}

BlockSystem build_two_field(const AssembledBlocks& blocks, const RightHandSide& rhs) {
  const AssembledBlocks* b = &blocks;
  const ProblemParams& p = blocks.params;
  const double eps = p.eps, em = p.eps / p.mu, aem = p.alpha * p.eps / p.mu;
  const auto nu = static_cast<std::size_t>(blocks.nu);
  const auto np = static_cast<std::size_t>(blocks.np);
  BlockSystem sys;
  sys.block_sizes = {blocks.nu, blocks.np};
  sys.op = {blocks.nu + blocks.np,
            [b, eps, em, aem, nu, np](std::span<const double> x, std::span<double> y) {
              const auto x1 = x.subspan(0, nu), x2 = x.subspan(nu, np);
              auto y1 = y.subspan(0, nu), y2 = y.subspan(nu, np);
              Vector t(nu);
              b->apply_A0(x1, y1);
              b->A1.multiply_add(eps, x1, y1);
              b->B.multiply_transpose(x2, t);
              axpy(aem, t, y1);
              b->D.multiply(x2, y2);
              for (double& v : y2) v *= -em;
              b->B.multiply_add(aem, x1, y2);
            }};
  sys.rhs.reserve(nu + np);
  for (double v : rhs.b1) sys.rhs.push_back(em * v);
  for (double v : rhs.b2) sys.rhs.push_back(em * v);
  return sys;
}

BlockSystem build_three_field(const AssembledBlocks& blocks, const RightHandSide& rhs) {
  const AssembledBlocks* b = &blocks;
  const ProblemParams& p = blocks.params;
  const double eps = p.eps, dscale = p.mu / (p.alpha * p.alpha);
  const auto nu = static_cast<std::size_t>(blocks.nu);
  const auto np = static_cast<std::size_t>(blocks.np);
  const auto nel = static_cast<std::size_t>(blocks.nel);
  BlockSystem sys;
  sys.block_sizes = {blocks.nu, blocks.np, blocks.nel};
  sys.op = {blocks.nu + blocks.np + blocks.nel,
            [b, eps, dscale, nu, np, nel](std::span<const double> x, std::span<double> y) {
              const auto x1 = x.subspan(0, nu), x2 = x.subspan(nu, np),
                         x3 = x.subspan(nu + np, nel);
              auto y1 = y.subspan(0, nu), y2 = y.subspan(nu, np), y3 = y.subspan(nu + np, nel);
              Vector t(nu);
              b->A1.multiply(x1, y1);
              b->Bcirc.multiply_transpose(x3, t);
              axpy(-1.0, t, y1);
              b->D_tilde2.multiply(x2, y2);
              for (double& v : y2) v *= -dscale;
              for (std::size_t i = 0; i < nel; ++i) y2[i] -= eps * b->mp[i] * x3[i];
              b->Bcirc.multiply(x1, y3);
              for (std::size_t i = 0; i < nel; ++i)
                y3[i] = -y3[i] - eps * b->mp[i] * (x2[i] + x3[i]);
            }};
  sys.rhs.reserve(nu + np + nel);
  for (double v : rhs.b1) sys.rhs.push_back(v / p.mu);
  for (double v : rhs.b2) sys.rhs.push_back(v / p.alpha);
  sys.rhs.resize(nu + np + nel, 0.0);
  return sys;
}

void write_matrix_market(std::ostream& out, const CsrMatrix& a, bool symmetric) {
  if (symmetric && a.rows() != a.cols())
    throw std::invalid_argument("symmetric storage requires a square matrix");
  std::vector<Triplet> entries;
  for (const Triplet& t : a.to_triplets())
    if (!symmetric || t.col <= t.row) entries.push_back(t);
  out << "%%MatrixMarket matrix coordinate real " << (symmetric ? "symmetric" : "general") << '\n';
  out << a.rows() << ' ' << a.cols() << ' ' << entries.size() << '\n';
  for (const Triplet& t : entries)
    out << t.row + 1 << ' ' << t.col + 1 << ' ' << shortest(t.value) << '\n';
}

void write_matrix_market(const std::string& path, const CsrMatrix& a, bool symmetric) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_matrix_market(out, a, symmetric);
  if (!out) throw IoError("write failed: " + path);
}

CsrMatrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0)
    throw std::invalid_argument("missing MatrixMarket banner");
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (object != "matrix" || format != "coordinate" || field != "real")
    throw std::invalid_argument("only real coordinate matrices are supported");
  if (symmetry != "general" && symmetry != "symmetric")
    throw std::invalid_argument("unsupported symmetry: " + symmetry);
  const bool symmetric = symmetry == "symmetric";
  while (std::getline(in, line) && (line.empty() || line[0] == '%')) {
  }
  std::istringstream size(line);
  Index rows = 0, cols = 0, count = 0;
  if (!(size >> rows >> cols >> count)) throw std::invalid_argument("bad MatrixMarket size line");
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(symmetric ? 2 * count : count));
  for (Index k = 0; k < count; ++k) {
    if (!std::getline(in, line)) throw std::invalid_argument("truncated MatrixMarket data");
    const char* p = line.data();
    const char* end = p + line.size();
    Index i = 0, j = 0;
    double v = 0.0;
    auto skip = [&] { while (p < end && (*p == ' ' || *p == '\t')) ++p; };
    skip();
    auto r1 = std::from_chars(p, end, i);
    p = r1.ptr;
    skip();
    auto r2 = std::from_chars(p, end, j);
    p = r2.ptr;
    skip();
    auto r3 = std::from_chars(p, end, v);
    if (r1.ec != std::errc() || r2.ec != std::errc() || r3.ec != std::errc())
      throw std::invalid_argument("bad MatrixMarket entry: " + line);
    t.push_back({i - 1, j - 1, v});
    if (symmetric && i != j) t.push_back({j - 1, i - 1, v});
  }
  return CsrMatrix::from_triplets(rows, cols, std::move(t));
}

CsrMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_matrix_market(in);
}

}  // namespace wgporo
