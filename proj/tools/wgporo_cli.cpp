// Command-line driver over the C interface.

#include <CLI11.hpp>

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "wgporo/wgporo.h"

namespace {

constexpr int kExitNotConverged = 1;
constexpr int kExitError = 2;

struct Flags {
  std::string config;
  std::map<std::string, std::string> values;  // config key -> raw value
};

void add_common(CLI::App* app, Flags& flags) {
  app->add_option("--config", flags.config, "key=value file; flags override it")
      ->check(CLI::ExistingFile);
  const std::vector<std::pair<std::string, std::string>> keys = {
      {"n", "mesh sizes 1/h, comma separated"},
      {"lambda", "Lame lambda values"},
      {"c0", "storage coefficients"},
      {"dt", "time steps"},
      {"kappa", "permeabilities"},
      {"precond", "p2, p2dlu, p2e, p3, p3dlu (comma separated)"},
      {"tol", "outer relative tolerance"},
      {"restart", "GMRES restart length"},
      {"jobs", "grid points solved concurrently"},
      {"format", "csv or markdown"},
      {"out", "output path (default: standard output)"},
      {"seed", "seed for randomized suites"},
  };
  for (const auto& [key, help] : keys) {
    app->add_option_function<std::string>(
        "--" + key, [&flags, key = key](const std::string& v) { flags.values[key] = v; }, help);
  }
}

int report_error(const char* what) {
  std::fprintf(stderr, "wgporo: %s: %s\n", what, wgp_last_error());
  return kExitError;
}

/// Creates the config for `problem`, then applies the file and the flags.
wgp_config* make_config(const char* problem, const Flags& flags) {
  wgp_config* cfg = nullptr;
  if (wgp_config_create(problem, &cfg) != WGP_OK) return nullptr;
  if (!flags.config.empty() && wgp_config_load(cfg, flags.config.c_str()) != WGP_OK) {
    wgp_config_destroy(cfg);
    return nullptr;
  }
  for (const auto& [key, value] : flags.values) {
    if (wgp_config_set(cfg, key.c_str(), value.c_str()) != WGP_OK) {
      wgp_config_destroy(cfg);
      return nullptr;
    }
  }
  if (wgp_config_validate(cfg) != WGP_OK) {
    wgp_config_destroy(cfg);
    return nullptr;
  }
  return cfg;
}

int run_sweep(const char* problem, const Flags& flags) {
  wgp_config* cfg = make_config(problem, flags);
  if (cfg == nullptr) return report_error("configuration");
  wgp_results* results = nullptr;
  if (wgp_run(cfg, &results) != WGP_OK) {
    wgp_config_destroy(cfg);
    return report_error("run");
  }
  int code = 0;
  if (wgp_results_write(results, nullptr, nullptr) != WGP_OK) {
    code = report_error("output");
  } else {
    int all = 0;
    wgp_results_all_converged(results, &all);
    code = all ? 0 : kExitNotConverged;
  }
  wgp_results_destroy(results);
  wgp_config_destroy(cfg);
  return code;
}

template <class F>
int run_check(const char* problem, const Flags& flags, const char* what, F&& call) {
  wgp_config* cfg = make_config(problem, flags);
  if (cfg == nullptr) return report_error("configuration");
  int ok = 0;
  const wgp_status st = call(cfg, &ok);
  wgp_config_destroy(cfg);
  if (st != WGP_OK) return report_error(what);
  return ok ? 0 : kExitNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weak Galerkin poroelasticity solvers and preconditioner experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", wgp_version());

  Flags elasticity, poro2, poro3, spectrum, pcg, exporter;
  CLI::App* c_el = app.add_subcommand("elasticity", "2D linear elasticity with P2e");
  CLI::App* c_p2 = app.add_subcommand("poro2", "2D two-/three-field poroelasticity");
  CLI::App* c_p3 = app.add_subcommand("poro3", "3D three-field poroelasticity");
  CLI::App* c_sp = app.add_subcommand("spectrum", "dense spectral checks (2D, n <= 16)");
  CLI::App* c_pcg = app.add_subcommand("pcg", "PCG iterations on A1 with and without IC");
  CLI::App* c_ex = app.add_subcommand("export", "write one assembled block as MatrixMarket");
  add_common(c_el, elasticity);
  add_common(c_p2, poro2);
  add_common(c_p3, poro3);
  add_common(c_sp, spectrum);
  add_common(c_pcg, pcg);
  add_common(c_ex, exporter);
  std::string block;
  int dim = 2;
  c_ex->add_option("--block", block, "A1 A0 B Bcirc Mp Ap D Dtt")->required();
  c_ex->add_option("--dim", dim, "2 or 3")->check(CLI::IsMember({2, 3}));

  CLI11_PARSE(app, argc, argv);

  if (c_el->parsed()) return run_sweep("elasticity", elasticity);
  if (c_p2->parsed()) return run_sweep("poro2", poro2);
  if (c_p3->parsed()) return run_sweep("poro3", poro3);
  if (c_sp->parsed()) {
    return run_check("poro2", spectrum, "spectrum",
                     [](wgp_config* cfg, int* ok) { return wgp_spectrum(cfg, nullptr, ok); });
  }
  if (c_pcg->parsed()) {
    return run_check("poro2", pcg, "pcg",
                     [](wgp_config* cfg, int* ok) { return wgp_pcg_table(cfg, nullptr, ok); });
  }
  return run_check(dim == 3 ? "poro3" : "poro2", exporter, "export",
                   [&](wgp_config* cfg, int* ok) {
                     const wgp_status st = wgp_export(cfg, block.c_str(), nullptr);
                     *ok = st == WGP_OK;
                     return st;
                   });
}
