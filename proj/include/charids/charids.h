#ifndef CHARIDS_H
#define CHARIDS_H

/* C interface to the characteristic initial data solver.
 *
 * The solver takes free data on two intersecting null hypersurfaces (a
 * conformal angular metric, the expansion and matter fields along each
 * surface) and integrates the constraint hierarchy outward from the corner,
 * producing the full set of metric transversal derivatives. A separate
 * verification pass differentiates the solved fields numerically and checks
 * them against the constraint equations.
 *
 * All functions return a charids_status; a human-readable message for the
 * most recent failure on the calling thread is available through
 * charids_last_error(). Handles are opaque and must be released with the
 * matching _free function.
 */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum charids_status {
  CHARIDS_OK = 0,
  CHARIDS_E_TOLERANCE = 1,  /* stored data fails a residual gate */
  CHARIDS_E_VALIDATION = 2, /* config rejected or free data inadmissible */
  CHARIDS_E_SOLVER = 3,     /* a hierarchy stage failed; domain truncated */
  CHARIDS_E_IO = 4,         /* missing or corrupt files */
  CHARIDS_E_ARG = 5         /* null pointer or malformed argument */
} charids_status;

typedef struct charids_config charids_config;
typedef struct charids_solution charids_solution;

const char* charids_version(void);

/* Message for the last failing call on this thread; "" when none. The
 * returned pointer stays valid until the next failing call on the thread. */
const char* charids_last_error(void);

/* ---- configuration ---- */

charids_status charids_config_load(const char* path, charids_config** out);
charids_status charids_config_loads(const char* text, charids_config** out);
void charids_config_free(charids_config* cfg);

/* Canonical key = value listing (every key, defaults filled in, sorted). */
const char* charids_config_canonical(const charids_config* cfg);
uint64_t charids_config_hash(const charids_config* cfg);

/* Checks free-data admissibility only; CHARIDS_E_VALIDATION lists the
 * violations in charids_last_error(). */
charids_status charids_validate(const charids_config* cfg);

/* ---- file-based pipeline (what the command-line tool calls) ---- */

/* Solve both surfaces, verify, and write field files plus manifest into
 * out_dir. Returns OK when the bundle is written, even if residual gates
 * failed (that outcome is reported by charids_verify). */
charids_status charids_solve(const char* config_path, const char* out_dir, int quiet);

/* Re-check a written bundle: manifest integrity, per-file content hashes,
 * then recompute all residual norms from the stored fields. */
charids_status charids_verify(const char* out_dir, int quiet);

/* Refinement ladder: the config grid is the finest level and each coarser
 * level halves both resolutions. Writes convergence.txt into out_dir. */
charids_status charids_convergence(const char* config_path, const char* out_dir,
                                   int levels, int quiet);

/* ---- in-memory pipeline ---- */

/* Solve both surfaces and verify, keeping everything in memory. */
charids_status charids_solve_mem(const charids_config* cfg, charids_solution** out);

/* Write a solved bundle (field files + manifest) into out_dir. */
charids_status charids_solution_write(const charids_solution* sol, const char* out_dir);

/* Residual outcome for surface 0 or 1: sets *out_pass to 1/0. The full norm
 * listing is returned (internal buffer, valid until the solution is freed
 * or this function is called again on it). */
const char* charids_solution_report(charids_solution* sol, int surface, int* out_pass);

void charids_solution_free(charids_solution* sol);

#ifdef __cplusplus
}
#endif

#endif /* CHARIDS_H */
