#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wgporo/precond.hpp"
#include "wgporo/spectrum.hpp"

namespace wgporo {

enum class OutputFormat { csv, markdown };

std::string_view to_string(OutputFormat format);
OutputFormat output_format_from_string(std::string_view name);

std::string_view to_string(ResidualMeasure measure);
ResidualMeasure residual_measure_from_string(std::string_view name);

/// A parameter sweep. Every combination of the lists is one grid point;
/// elasticity ignores c0, dt and kappa beyond their first entries.
struct ExperimentConfig {
  ProblemKind kind = ProblemKind::poro2d;
  std::vector<int> n{8};
  std::vector<double> lambda{1.4286, 1.6667e3, 1.6667e6};
  std::vector<double> c0{1.0, 0.0};
  std::vector<double> dt{1e-3, 1e-6};
  std::vector<double> kappa{1.0};
  std::vector<PrecondKind> precond{PrecondKind::p2};
  double E = 1.0;
  double alpha = 1.0;
  /// Unset fields fall back to solver_profile(dim).
  std::optional<double> tol;
  std::optional<int> restart;
  std::optional<ResidualMeasure> measure;
  int max_iterations = 2000;
  double inner_tol = kInnerTol;
  int steps = 1;  ///< implicit Euler steps from a zero state; the last is reported
  int jobs = 1;
  OutputFormat format = OutputFormat::csv;
  std::string out;  ///< empty: standard output
  std::uint64_t seed = 0;

  int dim() const { return kind == ProblemKind::poro3d ? 3 : 2; }
  SolverConfig solver() const;
  /// Throws std::invalid_argument on empty lists, bad tags or bad values.
  void validate() const;
};

/// Default preconditioner set per problem kind.
std::vector<PrecondKind> default_preconds(ProblemKind kind);

/// Reads `key = value` lines ('#' starts a comment). List values are
/// comma separated. Unknown keys are an error.
void apply_config_entry(ExperimentConfig& config, std::string_view key, std::string_view value);
void load_config(ExperimentConfig& config, std::istream& in);
void load_config_file(ExperimentConfig& config, const std::string& path);

struct StepResult {
  TimeState state;
  SolveReport report;
};

/// One implicit Euler step to time t from `prev`: assembles the loads and
/// previous-step terms, eliminates Dirichlet data and solves.
StepResult step_implicit_euler(const Mesh& mesh, const DofMap& dofs, const AssembledBlocks& blocks,
                               const ProblemInstance& problem, const TimeState& prev, double t,
                               PrecondKind kind, const SolverConfig& config,
                               const PrecondOptions& opts = {});

/// One grid point: `steps` implicit Euler steps (a single static solve for
/// elasticity). Solver failures are recorded in the report.
SolveReport run_point(ProblemKind kind, int n, const ProblemParams& params, PrecondKind precond,
                      const SolverConfig& config, const PrecondOptions& opts = {}, int steps = 1);

/// All grid points in grid order (n, lambda, c0, dt, kappa, precond), run
/// on up to `config.jobs` threads.
std::vector<SolveReport> run_experiment(const ExperimentConfig& config);

/// PCG on A1 with and without IC(kIcDropTol), right-hand side drawn from a
/// standard normal distribution seeded with `seed`.
struct PcgReport {
  int n = 0;
  std::string precond;  ///< ic | none
  int iterations = 0;
  bool converged = false;
  double relres = 0.0;
};

std::vector<PcgReport> run_pcg_a1(const std::vector<int>& ns, const SolverConfig& config,
                                  std::uint64_t seed);
void write_pcg_csv(std::ostream& out, const std::vector<PcgReport>& reports);

/// Dense spectral checks over the 2D grid of `config` (n <= 16): A0A1 and
/// beta per n; S2e per (n, lambda); S2 and S3 per grid point; P3A3 where
/// eps <= 1e-3 and S3lim where eps <= 1e-6; then one row for the random
/// saddle-point suite seeded with `config.seed`.
std::vector<SpectralReport> run_spectral_suite(const ExperimentConfig& config);

/// Named block of the assembled system; `symmetric` tells whether it is
/// stored as a symmetric MatrixMarket file.
CsrMatrix block_by_tag(const AssembledBlocks& blocks, std::string_view tag, bool& symmetric);
/// Assembles with the first entry of each list of `config` and writes `tag`.
void export_matrix_market(const ExperimentConfig& config, std::string_view tag,
                          const std::string& path);

std::string csv_header();
/// The timing column is the last one.
std::string to_csv_row(const SolveReport& report);
void write_csv(std::ostream& out, const std::vector<SolveReport>& reports);
std::vector<SolveReport> read_csv(std::istream& in);

/// One block per n with a row per lambda; columns run over c0 (descending),
/// preconditioner and dt, matching the layout of the published tables.
void write_markdown(std::ostream& out, const std::vector<SolveReport>& reports);

void emit_table(const std::vector<SolveReport>& reports, OutputFormat format, std::ostream& out);
/// Writes to `path`; throws std::runtime_error if it cannot be opened.
void emit_table(const std::vector<SolveReport>& reports, OutputFormat format,
                const std::string& path);

}  // namespace wgporo
