#ifndef WGPORO_H
#define WGPORO_H

/* C interface to the weak Galerkin poroelasticity solvers.
 *
 * Every function returns a wgp_status; on failure wgp_last_error() holds a
 * message for the calling thread until its next failing call. Handles are
 * opaque and owned by the caller, who releases them with the matching
 * destroy function. A config handle may be shared between threads only for
 * reading. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define WGP_API __attribute__((visibility("default")))
#else
#define WGP_API
#endif

typedef enum {
  WGP_OK = 0,
  WGP_INVALID_ARGUMENT = 1, /* bad key, value, tag or null handle */
  WGP_IO_ERROR = 2,         /* unreadable or unwritable file */
  WGP_NUMERICAL_ERROR = 3,  /* factorization or eigensolver failure */
  WGP_INTERNAL_ERROR = 4
} wgp_status;

typedef struct wgp_config wgp_config;
typedef struct wgp_results wgp_results;

/* One grid point of a sweep. */
typedef struct {
  int dim;
  int n;
  double lambda;
  double mu;
  double eps;
  double c0;
  double dt;
  double kappa;
  char precond[8];
  int iterations;
  int restarts;
  int converged;
  double relres;      /* in the stopping measure */
  double true_relres; /* of the unpreconditioned system */
  double wall_ms;
} wgp_row;

WGP_API const char* wgp_version(void);
WGP_API const char* wgp_last_error(void);

/* problem: "elasticity", "poro2" or "poro3". Defaults: n = 8, the three
 * standard lambda values, c0 = {1, 0}, dt = {1e-3, 1e-6}, kappa = 1 and
 * the problem's default preconditioners. */
WGP_API wgp_status wgp_config_create(const char* problem, wgp_config** out);
WGP_API void wgp_config_destroy(wgp_config* config);
/* Keys: problem n lambda c0 dt kappa precond E alpha tol restart measure
 * max_iterations inner_tol steps jobs format out seed. Lists are comma
 * separated. */
WGP_API wgp_status wgp_config_set(wgp_config* config, const char* key, const char* value);
/* key = value lines; '#' starts a comment. */
WGP_API wgp_status wgp_config_load(wgp_config* config, const char* path);
WGP_API wgp_status wgp_config_validate(const wgp_config* config);

/* Runs every grid point. Nonconvergence is reported per row, not as an
 * error. */
WGP_API wgp_status wgp_run(const wgp_config* config, wgp_results** out);
WGP_API void wgp_results_destroy(wgp_results* results);
WGP_API wgp_status wgp_results_count(const wgp_results* results, size_t* count);
WGP_API wgp_status wgp_results_get(const wgp_results* results, size_t index, wgp_row* row);
WGP_API wgp_status wgp_results_all_converged(const wgp_results* results, int* all);
/* format: "csv" or "markdown", or null for the config's format. path: null
 * or empty for the config's output, which defaults to standard output. */
WGP_API wgp_status wgp_results_write(const wgp_results* results, const char* format,
                                     const char* path);

/* Dense spectral checks over the config's 2D grid plus the random
 * saddle-point suite seeded by the config's seed. Writes one CSV row per
 * check to `path` (null: config output) and sets *all_pass. */
WGP_API wgp_status wgp_spectrum(const wgp_config* config, const char* path, int* all_pass);

/* PCG on A1 with and without incomplete Cholesky for each n of the config,
 * seeded normal right-hand side. Writes CSV and sets *all_converged. */
WGP_API wgp_status wgp_pcg_table(const wgp_config* config, const char* path,
                                 int* all_converged);

/* Writes one assembled block as MatrixMarket, using the first entry of
 * each parameter list. Tags: A1 A0 B Bcirc Mp Ap D Dtt (symmetric storage
 * for the symmetric ones). */
WGP_API wgp_status wgp_export(const wgp_config* config, const char* block, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* WGPORO_H */
