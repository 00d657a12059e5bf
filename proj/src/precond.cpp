#include "wgporo/precond.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace wgporo {

std::string_view to_string(PrecondKind kind) {
  switch (kind) {
    case PrecondKind::p2: return "p2";
    case PrecondKind::p2dlu: return "p2dlu";
    case PrecondKind::p2e: return "p2e";
    case PrecondKind::p3: return "p3";
    case PrecondKind::p3dlu: return "p3dlu";
  }
  return "unknown";
}

PrecondKind precond_kind_from_string(std::string_view name) {
  if (name == "p2") return PrecondKind::p2;
  if (name == "p2dlu") return PrecondKind::p2dlu;
  if (name == "p2e") return PrecondKind::p2e;
  if (name == "p3") return PrecondKind::p3;
  if (name == "p3dlu") return PrecondKind::p3dlu;
  throw std::invalid_argument("unknown preconditioner: " + std::string(name));
}

void InnerStats::merge(const InnerStats& other) {
  solves += other.solves;
  iterations += other.iterations;
  failures += other.failures;
  ic_shifted = ic_shifted || other.ic_shifted;
}

SpdInverse::SpdInverse(const CsrMatrix& a, bool ic_only, std::shared_ptr<InnerStats> stats,
                       double tol)
    : matrix_(&a), ic_(a, kIcDropTol), ic_only_(ic_only), tol_(tol), stats_(std::move(stats)) {
  if (ic_.shifted()) stats_->ic_shifted = true;
}

void SpdInverse::apply(std::span<const double> r, std::span<double> x) const {
  ++stats_->solves;
  if (ic_only_) {
    ic_.solve(r, x);
    return;
  }
  SolverConfig cfg;
  cfg.tol = tol_;
  cfg.max_iterations = 20000;
  const LinearOperator a = as_operator(*matrix_);
  const LinearOperator m = ic_.as_operator();
  const SolveStats s = pcg(a, &m, r, x, cfg);
  stats_->iterations += s.iterations;
  if (!s.converged) ++stats_->failures;
}

LinearOperator make_block_triangular(Index n1, Index n2, BlockMap apply_ainv, BlockMap bt,
                                     BlockMap apply_shatinv) {
  const auto s1 = static_cast<std::size_t>(n1), s2 = static_cast<std::size_t>(n2);
  return {n1 + n2, [=](std::span<const double> r, std::span<double> x) {
            auto x1 = x.subspan(0, s1);
            auto x2 = x.subspan(s1, s2);
            apply_shatinv(r.subspan(s1, s2), x2);
            for (double& v : x2) v = -v;
            Vector t(s1);
            bt(x2, t);
            for (std::size_t i = 0; i < s1; ++i) t[i] = r[i] - t[i];
            apply_ainv(t, x1);
          }};
}

namespace {

BlockMap mp_inverse(const AssembledBlocks* b) {
  return [b](std::span<const double> r, std::span<double> x) {
    for (std::size_t i = 0; i < r.size(); ++i) x[i] = r[i] / b->mp[i];
  };
}

/// Blocks the P2e operator refers to.
struct P2eState {
  SpdInverse a1;
};

Preconditioner p2e_with(const AssembledBlocks& blocks, std::shared_ptr<InnerStats> stats,
                        double inner_tol) {
  stats->tol = inner_tol;
  auto state =
      std::make_shared<P2eState>(P2eState{SpdInverse(blocks.A1, false, stats, inner_tol)});
  const AssembledBlocks* b = &blocks;
  const SpdInverse* a1 = &state->a1;
  LinearOperator op = make_block_triangular(
      blocks.nu, blocks.nel,
      [a1](std::span<const double> r, std::span<double> x) { a1->apply(r, x); },
      [b](std::span<const double> w, std::span<double> y) {
        b->Bcirc.multiply_transpose(w, y);
        for (double& v : y) v = -v;
      },
      mp_inverse(b));
  return {PrecondKind::p2e, std::move(op), std::move(stats), std::move(state)};
}

/// (eps A1 + A0)^{-1} through the elasticity saddle system: solve for
/// (eps u, w) with rhs [r; 0] and return u.
struct ElasticityInverse {
  const AssembledBlocks* blocks;
  BlockSystem saddle;
  Preconditioner p2e;
  std::shared_ptr<InnerStats> stats;
  double tol;

  void apply(std::span<const double> r, std::span<double> x) const {
    const auto nu = static_cast<std::size_t>(blocks->nu);
    Vector rhs(saddle.rhs.size(), 0.0), sol(saddle.rhs.size());
    std::copy(r.begin(), r.end(), rhs.begin());
    SolverConfig cfg;
    cfg.tol = tol;
    cfg.restart = 100;
    cfg.max_iterations = 2000;
    const SolveStats s = gmres(saddle.op, &p2e.op, rhs, sol, cfg);
    ++stats->solves;
    stats->iterations += s.iterations;
    if (!s.converged) ++stats->failures;
    const double inv_eps = 1.0 / blocks->params.eps;
    for (std::size_t i = 0; i < nu; ++i) x[i] = inv_eps * sol[i];
  }
};

struct P2State {
  std::shared_ptr<InnerStats> outer_stats;
  std::shared_ptr<InnerStats> elasticity_stats;
  ElasticityInverse leading;
  SpdInverse d;
};

Preconditioner p2_family(const AssembledBlocks& blocks, bool ic_only, double inner_tol) {
  auto stats = std::make_shared<InnerStats>();
  stats->tol = inner_tol;
  auto nested = std::make_shared<InnerStats>();
  RightHandSide zero{Vector(static_cast<std::size_t>(blocks.nu), 0.0), {}};
  ElasticityInverse leading{&blocks, build_elasticity_saddle(blocks, zero),
                            p2e_with(blocks, nested, inner_tol), stats, inner_tol};
  auto state = std::make_shared<P2State>(
      P2State{stats, nested, std::move(leading), SpdInverse(blocks.D, ic_only, stats, inner_tol)});
  const AssembledBlocks* b = &blocks;
  const ProblemParams& p = blocks.params;
  const double aem = p.alpha * p.eps / p.mu, mu_over_eps = p.mu / p.eps;
  const P2State* st = state.get();
  LinearOperator op = make_block_triangular(
      blocks.nu, blocks.np,
      [st](std::span<const double> r, std::span<double> x) { st->leading.apply(r, x); },
      [b, aem](std::span<const double> q, std::span<double> y) {
        b->B.multiply_transpose(q, y);
        for (double& v : y) v *= aem;
      },
      [st, mu_over_eps](std::span<const double> r, std::span<double> x) {
        st->d.apply(r, x);
        for (double& v : x) v *= mu_over_eps;
      });
  return {ic_only ? PrecondKind::p2dlu : PrecondKind::p2, std::move(op), stats,
          std::move(state)};
}

struct P3State {
  SpdInverse a1;
  SpdInverse d2;
};

Preconditioner p3_family(const AssembledBlocks& blocks, bool ic_only, double inner_tol) {
  auto stats = std::make_shared<InnerStats>();
  stats->tol = inner_tol;
  auto state = std::make_shared<P3State>(P3State{SpdInverse(blocks.A1, false, stats, inner_tol),
                                                 SpdInverse(blocks.D_tilde2, ic_only, stats,
                                                            inner_tol)});
  const AssembledBlocks* b = &blocks;
  const ProblemParams& p = blocks.params;
  const double a2mu = p.alpha * p.alpha / p.mu;
  const auto np = static_cast<std::size_t>(blocks.np);
  const auto nel = static_cast<std::size_t>(blocks.nel);
  const P3State* st = state.get();
  // Second block row collects (p^, y); S^ = diag((mu/alpha^2) D~~, Mp°).
  LinearOperator op = make_block_triangular(
      blocks.nu, blocks.np + blocks.nel,
      [st](std::span<const double> r, std::span<double> x) { st->a1.apply(r, x); },
      [b, np, nel](std::span<const double> q, std::span<double> y) {
        b->Bcirc.multiply_transpose(q.subspan(np, nel), y);
        for (double& v : y) v = -v;
      },
      [st, b, a2mu, np, nel](std::span<const double> r, std::span<double> x) {
        auto xp = x.subspan(0, np);
        st->d2.apply(r.subspan(0, np), xp);
        for (double& v : xp) v *= a2mu;
        mp_inverse(b)(r.subspan(np, nel), x.subspan(np, nel));
      });
  return {ic_only ? PrecondKind::p3dlu : PrecondKind::p3, std::move(op), std::move(stats),
          std::move(state)};
}

int mesh_n(const AssembledBlocks& blocks) {
  return static_cast<int>(std::lround(std::pow(static_cast<double>(blocks.nel), 1.0 / blocks.dim)));
}

double relative_residual(const LinearOperator& a, std::span<const double> b,
                         std::span<const double> x) {
  Vector r = a(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  const double bn = norm2(b);
  return bn > 0.0 ? norm2(r) / bn : norm2(r);
}

SolveReport base_report(const AssembledBlocks& blocks, PrecondKind kind, const SolveStats& s,
                        const Preconditioner& pc, double ms) {
  SolveReport rep;
  rep.precond = std::string(to_string(kind));
  rep.params = blocks.params;
  rep.n = mesh_n(blocks);
  rep.iterations = s.iterations;
  rep.restarts = s.restarts;
  rep.converged = s.converged;
  rep.relres = s.relative_residual;
  rep.true_relres = s.true_relative_residual;
  rep.primal_relres = s.true_relative_residual;
  rep.inner = *pc.stats;
  rep.wall_ms = ms;
  return rep;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

Preconditioner p2e_precond(const AssembledBlocks& blocks, const PrecondOptions& opts) {
  return p2e_with(blocks, std::make_shared<InnerStats>(), opts.inner_tol);
}
Preconditioner p2_precond(const AssembledBlocks& blocks, const PrecondOptions& opts) {
  return p2_family(blocks, false, opts.inner_tol);
}
Preconditioner p2dlu_precond(const AssembledBlocks& blocks, const PrecondOptions& opts) {
  return p2_family(blocks, true, opts.inner_tol);
}
Preconditioner p3_precond(const AssembledBlocks& blocks, const PrecondOptions& opts) {
  return p3_family(blocks, false, opts.inner_tol);
}
Preconditioner p3dlu_precond(const AssembledBlocks& blocks, const PrecondOptions& opts) {
  return p3_family(blocks, true, opts.inner_tol);
}

Preconditioner make_precond(PrecondKind kind, const AssembledBlocks& blocks,
                            const PrecondOptions& opts) {
  switch (kind) {
    case PrecondKind::p2: return p2_precond(blocks, opts);
    case PrecondKind::p2dlu: return p2dlu_precond(blocks, opts);
    case PrecondKind::p2e: return p2e_precond(blocks, opts);
    case PrecondKind::p3: return p3_precond(blocks, opts);
    case PrecondKind::p3dlu: return p3dlu_precond(blocks, opts);
  }
  throw std::invalid_argument("unknown preconditioner");
}

SolverConfig solver_profile(int dim) {
  SolverConfig cfg;
  if (dim == 3) {
    cfg.tol = 1e-3;
    cfg.restart = 28;
    cfg.measure = ResidualMeasure::preconditioned_vs_rhs;
  } else {
    cfg.tol = 1e-6;
    cfg.restart = 30;
    cfg.measure = ResidualMeasure::preconditioned;
  }
  return cfg;
}

SolveResult solve_elasticity(const AssembledBlocks& blocks, const RightHandSide& rhs,
                             const SolverConfig& config, const PrecondOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const BlockSystem saddle = build_elasticity_saddle(blocks, rhs);
  const Preconditioner pc = p2e_precond(blocks, opts);
  Vector x(saddle.rhs.size());
  const SolveStats s = gmres(saddle.op, &pc.op, saddle.rhs, x, config);
  SolveResult out;
  out.u.assign(x.begin(), x.begin() + blocks.nu);
  for (double& v : out.u) v /= blocks.params.eps;
  out.report = base_report(blocks, PrecondKind::p2e, s, pc, 0.0);
  const BlockSystem primal = build_elasticity(blocks, rhs);
  out.report.primal_relres = relative_residual(primal.op, primal.rhs, out.u);
  out.report.wall_ms = elapsed_ms(start);
  return out;
}

SolveResult solve_two_field(const AssembledBlocks& blocks, const RightHandSide& rhs,
                            PrecondKind kind, const SolverConfig& config,
                            const PrecondOptions& opts) {
  if (kind != PrecondKind::p2 && kind != PrecondKind::p2dlu)
    throw std::invalid_argument("two-field solve needs p2 or p2dlu");
  const auto start = std::chrono::steady_clock::now();
  const BlockSystem sys = build_two_field(blocks, rhs);
  const Preconditioner pc = make_precond(kind, blocks, opts);
  Vector x(sys.rhs.size());
  const SolveStats s = gmres(sys.op, &pc.op, sys.rhs, x, config);
  SolveResult out;
  out.u.assign(x.begin(), x.begin() + blocks.nu);
  out.p.assign(x.begin() + blocks.nu, x.end());
  out.report = base_report(blocks, kind, s, pc, elapsed_ms(start));
  out.report.inner.merge(*static_cast<const P2State*>(pc.state.get())->elasticity_stats);
  return out;
}

SolveResult solve_three_field(const AssembledBlocks& blocks, const RightHandSide& rhs,
                              PrecondKind kind, const SolverConfig& config,
                              const PrecondOptions& opts) {
  if (kind != PrecondKind::p3 && kind != PrecondKind::p3dlu)
    throw std::invalid_argument("three-field solve needs p3 or p3dlu");
  const auto start = std::chrono::steady_clock::now();
  const BlockSystem sys = build_three_field(blocks, rhs);
  const Preconditioner pc = make_precond(kind, blocks, opts);
  Vector x(sys.rhs.size());
  const SolveStats s = gmres(sys.op, &pc.op, sys.rhs, x, config);
  SolveResult out;
  out.u.assign(x.begin(), x.begin() + blocks.nu);
  const double scale = blocks.params.mu / blocks.params.alpha;
  out.p.assign(x.begin() + blocks.nu, x.begin() + blocks.nu + blocks.np);
  for (double& v : out.p) v *= scale;
  out.report = base_report(blocks, kind, s, pc, elapsed_ms(start));
  return out;
}

SolveResult solve(const AssembledBlocks& blocks, const RightHandSide& rhs, PrecondKind kind,
                  const SolverConfig& config, const PrecondOptions& opts) {
  switch (kind) {
    case PrecondKind::p2e: return solve_elasticity(blocks, rhs, config, opts);
    case PrecondKind::p2:
    case PrecondKind::p2dlu: return solve_two_field(blocks, rhs, kind, config, opts);
    case PrecondKind::p3:
    case PrecondKind::p3dlu: return solve_three_field(blocks, rhs, kind, config, opts);
  }
  throw std::invalid_argument("unknown preconditioner");
}

}  // namespace wgporo
