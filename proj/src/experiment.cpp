#include "wgporo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace wgporo {

std::string_view to_string(OutputFormat format) {
  return format == OutputFormat::csv ? "csv" : "markdown";
}

OutputFormat output_format_from_string(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "markdown" || name == "md") return OutputFormat::markdown;
  throw std::invalid_argument("unknown output format: " + std::string(name));
}

std::string_view to_string(ResidualMeasure measure) {
  switch (measure) {
    case ResidualMeasure::preconditioned: return "preconditioned";
    case ResidualMeasure::true_residual: return "true";
    case ResidualMeasure::preconditioned_vs_rhs: return "preconditioned_vs_rhs";
  }
  return "unknown";
}

ResidualMeasure residual_measure_from_string(std::string_view name) {
  if (name == "preconditioned") return ResidualMeasure::preconditioned;
  if (name == "true" || name == "true_residual") return ResidualMeasure::true_residual;
  if (name == "preconditioned_vs_rhs") return ResidualMeasure::preconditioned_vs_rhs;
  throw std::invalid_argument("unknown residual measure: " + std::string(name));
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc() || res.ptr != end || text.empty()) {
    throw std::invalid_argument("bad value for " + std::string(what) + ": '" +
                                std::string(text) + "'");
  }
  return value;
}

template <class T>
std::vector<T> parse_list(std::string_view text, std::string_view what) {
  std::vector<T> out;
  for (std::string_view item : split(text, ',')) out.push_back(parse_number<T>(item, what));
  return out;
}

bool parse_bool(std::string_view text) {
  if (text == "1" || text == "true") return true;
  if (text == "0" || text == "false") return false;
  throw std::invalid_argument("bad boolean: '" + std::string(text) + "'");
}

}  // namespace

std::vector<PrecondKind> default_preconds(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::elasticity2d: return {PrecondKind::p2e};
    case ProblemKind::poro2d: return {PrecondKind::p2, PrecondKind::p2dlu};
    case ProblemKind::poro3d: return {PrecondKind::p3};
  }
  return {};
}

SolverConfig ExperimentConfig::solver() const {
  SolverConfig cfg = solver_profile(dim());
  if (tol) cfg.tol = *tol;
  if (restart) cfg.restart = *restart;
  if (measure) cfg.measure = *measure;
  cfg.max_iterations = max_iterations;
  return cfg;
}

void ExperimentConfig::validate() const {
  auto need = [](bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(std::string("config: ") + msg);
  };
  need(!n.empty() && !lambda.empty() && !c0.empty() && !dt.empty() && !kappa.empty(),
       "parameter lists must be nonempty");
  need(!precond.empty(), "preconditioner list must be nonempty");
  for (int v : n) need(v >= 1, "n must be positive");
  for (double v : lambda) need(v > 0.0, "lambda must be positive");
  for (double v : c0) need(v >= 0.0, "c0 must be nonnegative");
  for (double v : dt) need(v > 0.0, "dt must be positive");
  for (double v : kappa) need(v > 0.0, "kappa must be positive");
  need(E > 0.0 && alpha > 0.0, "E and alpha must be positive");
  need(steps >= 1, "steps must be at least 1");
  need(jobs >= 1, "jobs must be at least 1");
  need(inner_tol > 0.0, "inner_tol must be positive");
  for (PrecondKind p : precond) {
    const bool ok = kind == ProblemKind::elasticity2d
                        ? p == PrecondKind::p2e
                        : (kind == ProblemKind::poro2d ? p != PrecondKind::p2e
                                                       : (p == PrecondKind::p3 ||
                                                          p == PrecondKind::p3dlu));
    need(ok, "preconditioner does not apply to this problem");
  }
  solver().validate();
}

void apply_config_entry(ExperimentConfig& c, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "problem" || key == "kind") {
    c.kind = problem_kind_from_string(value);
  } else if (key == "n") {
    c.n = parse_list<int>(value, key);
  } else if (key == "lambda") {
    c.lambda = parse_list<double>(value, key);
  } else if (key == "c0") {
    c.c0 = parse_list<double>(value, key);
  } else if (key == "dt") {
    c.dt = parse_list<double>(value, key);
  } else if (key == "kappa") {
    c.kappa = parse_list<double>(value, key);
  } else if (key == "precond") {
    c.precond.clear();
    for (std::string_view item : split(value, ','))
      if (!item.empty()) c.precond.push_back(precond_kind_from_string(item));
  } else if (key == "E") {
    c.E = parse_number<double>(value, key);
  } else if (key == "alpha") {
    c.alpha = parse_number<double>(value, key);
  } else if (key == "tol") {
    c.tol = parse_number<double>(value, key);
  } else if (key == "restart") {
    c.restart = parse_number<int>(value, key);
  } else if (key == "measure") {
    c.measure = residual_measure_from_string(value);
  } else if (key == "max_iterations") {
    c.max_iterations = parse_number<int>(value, key);
  } else if (key == "inner_tol") {
    c.inner_tol = parse_number<double>(value, key);
  } else if (key == "steps") {
    c.steps = parse_number<int>(value, key);
  } else if (key == "jobs") {
    c.jobs = parse_number<int>(value, key);
  } else if (key == "format") {
    c.format = output_format_from_string(value);
  } else if (key == "out") {
    c.out = std::string(value);
  } else if (key == "seed") {
    c.seed = parse_number<std::uint64_t>(value, key);
  } else {
    throw std::invalid_argument("unknown config key: " + std::string(key));
  }
}

void load_config(ExperimentConfig& config, std::istream& in) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
    }
    apply_config_entry(config, s.substr(0, eq), s.substr(eq + 1));
  }
}

void load_config_file(ExperimentConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  load_config(config, in);
}

StepResult step_implicit_euler(const Mesh& mesh, const DofMap& dofs, const AssembledBlocks& blocks,
                               const ProblemInstance& problem, const TimeState& prev, double t,
                               PrecondKind kind, const SolverConfig& config,
                               const PrecondOptions& opts) {
  RightHandSide rhs = assemble_rhs(mesh, dofs, blocks, problem, t, &prev);
  const DirichletValues bc = project_dirichlet(mesh, dofs, problem, t);
  apply_dirichlet(blocks, bc, problem.has_pressure(), rhs);
  SolveResult res = solve(blocks, rhs, kind, config, opts);
  StepResult out;
  out.state.u = std::move(res.u);
  out.state.u_boundary = bc.u;
  out.state.p = res.p.empty() ? Vector(blocks.np, 0.0) : std::move(res.p);
  out.report = std::move(res.report);
  return out;
}

SolveReport run_point(ProblemKind kind, int n, const ProblemParams& params, PrecondKind precond,
                      const SolverConfig& config, const PrecondOptions& opts, int steps) {
  try {
    const Mesh mesh(n, params.dim);
    const DofMap dofs(mesh);
    const AssembledBlocks blocks = assemble_blocks(mesh, dofs, params);
    const ProblemInstance problem = make_problem(kind, params);
    const int count = kind == ProblemKind::elasticity2d ? 1 : steps;
    TimeState state = TimeState::zero(dofs);
    SolveReport report;
    bool all_converged = true;
    for (int k = 1; k <= count; ++k) {
      StepResult r = step_implicit_euler(mesh, dofs, blocks, problem, state, k * params.dt,
                                         precond, config, opts);
      state = std::move(r.state);
      report = std::move(r.report);
      all_converged = all_converged && report.converged;
    }
    report.converged = all_converged;
    return report;
  } catch (const std::exception& e) {
    SolveReport report;
    report.precond = std::string(to_string(precond));
    report.params = params;
    report.n = n;
    report.error = e.what();
    return report;
  }
}

std::vector<SolveReport> run_experiment(const ExperimentConfig& config) {
  config.validate();
  const SolverConfig solver = config.solver();
  const PrecondOptions opts{config.inner_tol};
  const bool elastic = config.kind == ProblemKind::elasticity2d;
  const std::size_t nc0 = elastic ? 1 : config.c0.size();
  const std::size_t ndt = elastic ? 1 : config.dt.size();
  const std::size_t nkappa = elastic ? 1 : config.kappa.size();

  struct Point {
    int n;
    ProblemParams params;
    PrecondKind precond;
  };
  std::vector<Point> grid;
  for (int n : config.n)
    for (double lambda : config.lambda)
      for (std::size_t i = 0; i < nc0; ++i)
        for (std::size_t j = 0; j < ndt; ++j)
          for (std::size_t k = 0; k < nkappa; ++k)
            for (PrecondKind p : config.precond)
              grid.push_back({n,
                              ProblemParams::make(config.dim(), config.E, lambda, config.alpha,
                                                  config.c0[i], config.kappa[k], config.dt[j]),
                              p});

  std::vector<SolveReport> reports(grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      reports[i] = run_point(config.kind, grid[i].n, grid[i].params, grid[i].precond, solver,
                             opts, config.steps);
    }
  };
  const int threads = std::min<int>(config.jobs, static_cast<int>(grid.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return reports;
}

std::vector<PcgReport> run_pcg_a1(const std::vector<int>& ns, const SolverConfig& config,
                                  std::uint64_t seed) {
  std::vector<PcgReport> out;
  for (int n : ns) {
    const Mesh mesh(n, 2);
    const DofMap dofs(mesh);
    const AssembledBlocks blocks =
        assemble_blocks(mesh, dofs, ProblemParams::make(2, 1.0, 1.0, 1.0, 1.0, 1.0, 1e-3));
    std::mt19937 rng(static_cast<std::mt19937::result_type>(seed));
    std::normal_distribution<double> normal;
    Vector b(blocks.nu);
    for (double& v : b) v = normal(rng);
    const LinearOperator a = as_operator(blocks.A1);
    const IncompleteCholesky ic(blocks.A1, kIcDropTol);
    const LinearOperator m = ic.as_operator();
    for (const LinearOperator* pc : {&m, static_cast<const LinearOperator*>(nullptr)}) {
      Vector x(blocks.nu, 0.0);
      const SolveStats s = pcg(a, pc, b, x, config);
      out.push_back({n, pc ? "ic" : "none", s.iterations, s.converged, s.relative_residual});
    }
  }
  return out;
}

void write_pcg_csv(std::ostream& out, const std::vector<PcgReport>& reports) {
  out << "n,precond,iters,converged,relres\n";
  for (const PcgReport& r : reports) {
    out << r.n << ',' << r.precond << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << ','
        << shortest(r.relres) << '\n';
  }
}

std::vector<SpectralReport> run_spectral_suite(const ExperimentConfig& config) {
  config.validate();
  if (config.dim() != 2) throw std::invalid_argument("spectral suite: 2D problems only");
  std::vector<SpectralReport> out;
  for (int n : config.n) {
    if (n > 16) throw std::invalid_argument("spectral suite: n must be at most 16");
    const Mesh mesh(n, 2);
    const DofMap dofs(mesh);
    bool first = true;
    for (double lambda : config.lambda) {
      bool first_lambda = true;
      for (double c0 : config.c0)
        for (double dt : config.dt)
          for (double kappa : config.kappa) {
            const ProblemParams params =
                ProblemParams::make(2, config.E, lambda, config.alpha, c0, kappa, dt);
            const AssembledBlocks blocks = assemble_blocks(mesh, dofs, params);
            if (first) {
              out.push_back(operator_inequality(blocks));
              const InfSup is = compute_infsup(blocks);
              SpectralReport beta = out.back();
              beta.tag = "beta";
              beta.eigenvalues.clear();
              beta.checks.clear();
              beta.min_eig = is.beta;
              beta.max_eig = is.sigma_max;
              beta.bound = std::sqrt(2.0);
              beta.beta = is.beta;
              beta.checks.push_back({"near_zero", double(is.near_zero), 1.0, false,
                                     is.near_zero == 1});
              beta.checks.push_back({"beta", is.beta, 0.0, true, is.beta > 0.0});
              beta.pass = is.near_zero == 1 && is.beta > 0.0;
              out.push_back(std::move(beta));
              first = false;
            }
            if (first_lambda) {
              out.push_back(dense_schur_elasticity(blocks));
              first_lambda = false;
            }
            out.push_back(dense_schur_two_field(blocks));
            out.push_back(dense_schur_three_field(blocks));
            if (params.eps <= 1e-3) out.push_back(preconditioned_three_field(blocks));
            if (params.eps <= 1e-6) out.push_back(three_field_limit(blocks));
          }
    }
  }
  const LemmaSuiteReport lemma = lemma_a1_suite(config.seed);
  SpectralReport row;
  row.tag = "lemma";
  row.min_eig = lemma.multiset_error;
  row.max_eig = std::max({lemma.exact_schur_error, lemma.c0_poly_error,
                          lemma.general_poly_error, lemma.pinv_error,
                          lemma.norm_identity_error});
  row.bound = 1e-8;
  row.pass = lemma.pass;
  out.push_back(std::move(row));
  return out;
}

CsrMatrix block_by_tag(const AssembledBlocks& b, std::string_view tag, bool& symmetric) {
  symmetric = true;
  if (tag == "A1") return b.A1;
  if (tag == "A0") return b.A0_product();
  if (tag == "Mp") return b.Mp;
  if (tag == "Ap") return b.Ap;
  if (tag == "D") return b.D;
  if (tag == "Dtt") return b.D_tilde2;
  symmetric = false;
  if (tag == "B") return b.B;
  if (tag == "Bcirc") return b.Bcirc;
  throw std::invalid_argument("unknown block tag: " + std::string(tag));
}

void export_matrix_market(const ExperimentConfig& config, std::string_view tag,
                          const std::string& path) {
  config.validate();
  const ProblemParams params =
      ProblemParams::make(config.dim(), config.E, config.lambda.front(), config.alpha,
                          config.c0.front(), config.kappa.front(), config.dt.front());
  const Mesh mesh(config.n.front(), config.dim());
  const DofMap dofs(mesh);
  const AssembledBlocks blocks = assemble_blocks(mesh, dofs, params);
  bool symmetric = false;
  const CsrMatrix a = block_by_tag(blocks, tag, symmetric);
  write_matrix_market(path, a, symmetric);
}

std::string csv_header() {
  return "dim,n,lambda,mu,eps,c0,dt,kappa,precond,iters,converged,relres,wall_ms";
}

std::string to_csv_row(const SolveReport& r) {
  const ProblemParams& p = r.params;
  std::string row = std::to_string(p.dim) + ',' + std::to_string(r.n);
  for (double v : {p.lambda, p.mu, p.eps, p.c0, p.dt, p.kappa}) row += ',' + shortest(v);
  row += ',' + r.precond + ',' + std::to_string(r.iterations) + ',' + (r.converged ? "1" : "0");
  row += ',' + shortest(r.relres) + ',' + shortest(r.wall_ms);
  return row;
}

void write_csv(std::ostream& out, const std::vector<SolveReport>& reports) {
  out << csv_header() << '\n';
  for (const SolveReport& r : reports) out << to_csv_row(r) << '\n';
}

std::vector<SolveReport> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != csv_header()) {
    throw std::invalid_argument("csv: missing or unexpected header");
  }
  std::vector<SolveReport> out;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 13) throw std::invalid_argument("csv: expected 13 fields: " + line);
    SolveReport r;
    r.params.dim = parse_number<int>(f[0], "dim");
    r.n = parse_number<int>(f[1], "n");
    r.params.lambda = parse_number<double>(f[2], "lambda");
    r.params.mu = parse_number<double>(f[3], "mu");
    r.params.eps = parse_number<double>(f[4], "eps");
    r.params.c0 = parse_number<double>(f[5], "c0");
    r.params.dt = parse_number<double>(f[6], "dt");
    r.params.kappa = parse_number<double>(f[7], "kappa");
    r.precond = std::string(f[8]);
    r.iterations = parse_number<int>(f[9], "iters");
    r.converged = parse_bool(f[10]);
    r.relres = parse_number<double>(f[11], "relres");
    r.wall_ms = parse_number<double>(f[12], "wall_ms");
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

template <class T>
void add_unique(std::vector<T>& values, const T& v) {
  if (std::find(values.begin(), values.end(), v) == values.end()) values.push_back(v);
}

std::string sci(double v) {
  std::ostringstream s;
  s.precision(4);
  s << std::scientific << v;
  return s.str();
}

}  // namespace

void write_markdown(std::ostream& out, const std::vector<SolveReport>& reports) {
  std::vector<int> ns;
  std::vector<double> lambdas, c0s, dts;
  std::vector<std::string> preconds;
  for (const SolveReport& r : reports) {
    add_unique(ns, r.n);
    add_unique(lambdas, r.params.lambda);
    add_unique(c0s, r.params.c0);
    add_unique(dts, r.params.dt);
    add_unique(preconds, r.precond);
  }
  std::sort(c0s.begin(), c0s.end(), std::greater<>());

  auto find = [&](int n, double lambda, double c0, const std::string& pc,
                  double dt) -> const SolveReport* {
    for (const SolveReport& r : reports) {
      if (r.n == n && r.params.lambda == lambda && r.params.c0 == c0 && r.precond == pc &&
          r.params.dt == dt)
        return &r;
    }
    return nullptr;
  };

  out << "| 1/h | lambda |";
  std::size_t columns = 0;
  for (double c0 : c0s)
    for (const std::string& pc : preconds)
      for (double dt : dts) {
        // Elasticity has no storage or time-step parameter.
        if (pc == "p2e") {
          out << ' ' << pc << " |";
        } else {
          out << " c0=" << shortest(c0) << ' ' << pc << " dt=" << shortest(dt) << " |";
        }
        ++columns;
      }
  out << "\n|---|---|";
  for (std::size_t i = 0; i < columns; ++i) out << "---|";
  out << '\n';
  for (int n : ns) {
    for (std::size_t li = 0; li < lambdas.size(); ++li) {
      out << "| " << (li == 0 ? std::to_string(n) : std::string()) << " | " << sci(lambdas[li])
          << " |";
      for (double c0 : c0s)
        for (const std::string& pc : preconds)
          for (double dt : dts) {
            const SolveReport* r = find(n, lambdas[li], c0, pc, dt);
            if (r == nullptr) {
              out << " - |";
            } else {
              out << ' ' << r->iterations << (r->converged ? "" : "*") << " |";
            }
          }
      out << '\n';
    }
  }
}

void emit_table(const std::vector<SolveReport>& reports, OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::csv) {
    write_csv(out, reports);
  } else {
    write_markdown(out, reports);
  }
}

void emit_table(const std::vector<SolveReport>& reports, OutputFormat format,
                const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  emit_table(reports, format, out);
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace wgporo
