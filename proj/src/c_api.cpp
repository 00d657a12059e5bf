#include "wgporo/wgporo.h"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "wgporo/experiment.hpp"
#include "wgporo/ichol.hpp"

struct wgp_config {
  wgporo::ExperimentConfig config;
  bool precond_set = false;
};

struct wgp_results {
  std::vector<wgporo::SolveReport> reports;
  wgporo::OutputFormat format;
  std::string out;
};

namespace {

thread_local std::string last_error;

wgp_status fail(wgp_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <class F>
wgp_status guarded(F&& body) {
  try {
    body();
    return WGP_OK;
  } catch (const wgporo::IoError& e) {
    return fail(WGP_IO_ERROR, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(WGP_INVALID_ARGUMENT, e.what());
  } catch (const wgporo::BreakdownError& e) {
    return fail(WGP_NUMERICAL_ERROR, e.what());
  } catch (const std::exception& e) {
    return fail(WGP_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(WGP_INTERNAL_ERROR, "unknown exception");
  }
}

wgp_status null_handle() { return fail(WGP_INVALID_ARGUMENT, "null argument"); }

/// Runs `write` on the named file, or on standard output for an empty path.
template <class F>
void with_output(const std::string& path, F&& write) {
  if (path.empty()) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw wgporo::IoError("cannot write " + path);
  write(out);
  if (!out) throw wgporo::IoError("write failed: " + path);
}

std::string output_path(const wgp_config* c, const char* path) {
  return path != nullptr && *path != '\0' ? std::string(path) : c->config.out;
}

}  // namespace

extern "C" {

const char* wgp_version(void) { return "1.0.0"; }

const char* wgp_last_error(void) { return last_error.c_str(); }

wgp_status wgp_config_create(const char* problem, wgp_config** out) {
  if (problem == nullptr || out == nullptr) return null_handle();
  *out = nullptr;
  return guarded([&] {
    auto c = std::make_unique<wgp_config>();
    c->config.kind = wgporo::problem_kind_from_string(problem);
    c->config.precond = wgporo::default_preconds(c->config.kind);
    *out = c.release();
  });
}

void wgp_config_destroy(wgp_config* config) { delete config; }

wgp_status wgp_config_set(wgp_config* config, const char* key, const char* value) {
  if (config == nullptr || key == nullptr || value == nullptr) return null_handle();
  return guarded([&] {
    const std::string_view k(key);
    wgporo::apply_config_entry(config->config, k, value);
    if (k == "precond") config->precond_set = true;
    if ((k == "problem" || k == "kind") && !config->precond_set)
      config->config.precond = wgporo::default_preconds(config->config.kind);
  });
}

wgp_status wgp_config_load(wgp_config* config, const char* path) {
  if (config == nullptr || path == nullptr) return null_handle();
  return guarded([&] {
    std::ifstream in(path);
    if (!in) throw wgporo::IoError(std::string("cannot open config file: ") + path);
    // Line by line through wgp_config_set so a `problem` line resets the
    // default preconditioners unless `precond` was given.
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::string_view s = line;
      if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
      if (s.find_first_not_of(" \t\r") == std::string_view::npos) continue;
      const auto eq = s.find('=');
      if (eq == std::string_view::npos)
        throw std::invalid_argument(std::string(path) + ":" + std::to_string(lineno) +
                                    ": expected key=value");
      const std::string key(s.substr(0, eq));
      const std::string value(s.substr(eq + 1));
      const auto first = key.find_first_not_of(" \t");
      const auto last = key.find_last_not_of(" \t");
      const std::string k = key.substr(first, last - first + 1);
      if (const wgp_status st = wgp_config_set(config, k.c_str(), value.c_str()); st != WGP_OK)
        throw std::invalid_argument(std::string(path) + ":" + std::to_string(lineno) + ": " +
                                    last_error);
    }
  });
}

wgp_status wgp_config_validate(const wgp_config* config) {
  if (config == nullptr) return null_handle();
  return guarded([&] { config->config.validate(); });
}

wgp_status wgp_run(const wgp_config* config, wgp_results** out) {
  if (config == nullptr || out == nullptr) return null_handle();
  *out = nullptr;
  return guarded([&] {
    auto r = std::make_unique<wgp_results>();
    r->reports = wgporo::run_experiment(config->config);
    r->format = config->config.format;
    r->out = config->config.out;
    *out = r.release();
  });
}

void wgp_results_destroy(wgp_results* results) { delete results; }

wgp_status wgp_results_count(const wgp_results* results, size_t* count) {
  if (results == nullptr || count == nullptr) return null_handle();
  *count = results->reports.size();
  return WGP_OK;
}

wgp_status wgp_results_get(const wgp_results* results, size_t index, wgp_row* row) {
  if (results == nullptr || row == nullptr) return null_handle();
  if (index >= results->reports.size()) return fail(WGP_INVALID_ARGUMENT, "row index out of range");
  const wgporo::SolveReport& r = results->reports[index];
  *row = wgp_row{};
  row->dim = r.params.dim;
  row->n = r.n;
  row->lambda = r.params.lambda;
  row->mu = r.params.mu;
  row->eps = r.params.eps;
  row->c0 = r.params.c0;
  row->dt = r.params.dt;
  row->kappa = r.params.kappa;
  std::strncpy(row->precond, r.precond.c_str(), sizeof row->precond - 1);
  row->iterations = r.iterations;
  row->restarts = r.restarts;
  row->converged = r.converged ? 1 : 0;
  row->relres = r.relres;
  row->true_relres = r.true_relres;
  row->wall_ms = r.wall_ms;
  return WGP_OK;
}

wgp_status wgp_results_all_converged(const wgp_results* results, int* all) {
  if (results == nullptr || all == nullptr) return null_handle();
  *all = 1;
  for (const auto& r : results->reports)
    if (!r.converged) *all = 0;
  return WGP_OK;
}

wgp_status wgp_results_write(const wgp_results* results, const char* format, const char* path) {
  if (results == nullptr) return null_handle();
  return guarded([&] {
    const wgporo::OutputFormat f =
        format != nullptr ? wgporo::output_format_from_string(format) : results->format;
    const std::string p = path != nullptr && *path != '\0' ? std::string(path) : results->out;
    with_output(p, [&](std::ostream& os) { wgporo::emit_table(results->reports, f, os); });
  });
}

wgp_status wgp_spectrum(const wgp_config* config, const char* path, int* all_pass) {
  if (config == nullptr || all_pass == nullptr) return null_handle();
  return guarded([&] {
    const auto reports = wgporo::run_spectral_suite(config->config);
    *all_pass = 1;
    for (const auto& r : reports)
      if (!r.pass) *all_pass = 0;
    with_output(output_path(config, path),
                [&](std::ostream& os) { wgporo::write_spectral_csv(os, reports); });
  });
}

wgp_status wgp_pcg_table(const wgp_config* config, const char* path, int* all_converged) {
  if (config == nullptr || all_converged == nullptr) return null_handle();
  return guarded([&] {
    wgporo::SolverConfig solver = config->config.solver();
    solver.max_iterations = std::max(solver.max_iterations, 20000);
    const auto reports = wgporo::run_pcg_a1(config->config.n, solver, config->config.seed);
    *all_converged = 1;
    for (const auto& r : reports)
      if (!r.converged) *all_converged = 0;
    with_output(output_path(config, path),
                [&](std::ostream& os) { wgporo::write_pcg_csv(os, reports); });
  });
}

wgp_status wgp_export(const wgp_config* config, const char* block, const char* path) {
  if (config == nullptr || block == nullptr) return null_handle();
  return guarded([&] {
    const std::string p = output_path(config, path);
    if (p.empty()) throw std::invalid_argument("export needs an output path");
    wgporo::export_matrix_market(config->config, block, p);
  });
}

}  // extern "C"
