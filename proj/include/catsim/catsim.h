/* C interface to the catsim simulator.
 *
 * All functions return a catsim_status. On failure a message is available
 * from catsim_last_error() on the calling thread until the next call into
 * the library from that thread. Handles are opaque and owned by the caller;
 * release them with the matching *_destroy function. Strings returned by
 * accessor functions live as long as the handle they came from.
 */
#ifndef CATSIM_CATSIM_H
#define CATSIM_CATSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CATSIM_BUILDING_LIBRARY)
#    define CATSIM_API __declspec(dllexport)
#  else
#    define CATSIM_API __declspec(dllimport)
#  endif
#else
#  define CATSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum catsim_status {
  CATSIM_OK = 0,
  CATSIM_ERR_ARGUMENT = 1, /* null pointer, domain violation */
  CATSIM_ERR_CONFIG = 2,   /* configuration failed validation */
  CATSIM_ERR_NUMERIC = 3,  /* numerical failure, e.g. non-convergent quadrature */
  CATSIM_ERR_IO = 4,
  CATSIM_ERR_INTERNAL = 5
} catsim_status;

typedef enum catsim_pattern_kind {
  CATSIM_PATTERN_UNITARY = 0,       /* coherent branches after the horizon */
  CATSIM_PATTERN_COLLAPSED = 1,     /* trial-averaged collapse runs */
  CATSIM_PATTERN_HALF_SILVERED = 2, /* physical beam-splitter reference */
  CATSIM_PATTERN_MIXED = 3          /* random-phase ensemble, unitary */
} catsim_pattern_kind;

typedef struct catsim_config catsim_config;
typedef struct catsim_result catsim_result;
typedef struct catsim_simulation catsim_simulation;

CATSIM_API const char* catsim_version(void);
CATSIM_API const char* catsim_last_error(void);

/* ---- configuration and experiment runs ---- */

/* Strict JSON parse; NULL or "" gives the defaults. Diagnostics, one per
 * line as "key: constraint", are reported through catsim_last_error(). */
CATSIM_API catsim_status catsim_config_parse(const char* json_text, catsim_config** out);
CATSIM_API void catsim_config_destroy(catsim_config* config);
/* Resolved configuration with every default filled in. */
CATSIM_API const char* catsim_config_resolved_json(const catsim_config* config);
CATSIM_API const char* catsim_config_experiment(const catsim_config* config);

/* Runs the configured experiment and writes its CSV/JSON files into out_dir. */
CATSIM_API catsim_status catsim_run(const catsim_config* config, const char* out_dir,
                                    catsim_result** out);
CATSIM_API void catsim_result_destroy(catsim_result* result);
CATSIM_API const char* catsim_result_summary_json(const catsim_result* result);
CATSIM_API size_t catsim_result_file_count(const catsim_result* result);
CATSIM_API const char* catsim_result_file(const catsim_result* result, size_t index);

/* ---- closed-form quantities (CGS units, seconds) ---- */

CATSIM_API catsim_status catsim_survival_single(double mean_life, double t, double* out);
CATSIM_API catsim_status catsim_decayed_single(double mean_life, double t, double* out);
CATSIM_API catsim_status catsim_sample_branch_norms(double n_nuclei, double mean_life, double t,
                                                    double* intact, double* decayed);
CATSIM_API catsim_status catsim_calibrate_mean_life(double n_nuclei, double horizon, double* mean_life);
CATSIM_API catsim_status catsim_spread_width(double mass, double dk, double t, double* out);
CATSIM_API catsim_status catsim_doubling_time(double mass, double sigma0, double* out);
CATSIM_API catsim_status catsim_ratio_overlap(double bound_extent, double spread_extent, double* out);
CATSIM_API catsim_status catsim_gaussian_branch_overlap(double width1, double width2, double separation,
                                                        double* out);
CATSIM_API catsim_status catsim_visibility(const double* intensities, size_t n, size_t begin, size_t end,
                                           double* out);

/* ---- simulation handle built from a configuration ---- */

CATSIM_API catsim_status catsim_simulation_create(const catsim_config* config, catsim_simulation** out);
CATSIM_API void catsim_simulation_destroy(catsim_simulation* sim);
CATSIM_API size_t catsim_simulation_screen_points(const catsim_simulation* sim);
CATSIM_API catsim_status catsim_simulation_positions(const catsim_simulation* sim, double* out, size_t n);
/* Unitary branch norms at time t. */
CATSIM_API catsim_status catsim_simulation_branch_norms(const catsim_simulation* sim, double t,
                                                        double* intact, double* decayed);
/* |<intact|decayed>| of the mirror packets after unitary evolution to t. */
CATSIM_API catsim_status catsim_simulation_branch_overlap(const catsim_simulation* sim, double t, double* out);
/* Fraction of seeded collapse runs ending with a detection before the horizon. */
CATSIM_API catsim_status catsim_simulation_collapsed_fraction(const catsim_simulation* sim, size_t trials,
                                                              uint64_t seed, double* out);
/* Screen intensities at the configured horizon; n must equal the screen point count. */
CATSIM_API catsim_status catsim_simulation_pattern(const catsim_simulation* sim, catsim_pattern_kind kind,
                                                   double* intensities, size_t n);
/* Visibility over the configured central window. */
CATSIM_API catsim_status catsim_simulation_central_visibility(const catsim_simulation* sim,
                                                              const double* intensities, size_t n,
                                                              double* out);

#ifdef __cplusplus
}
#endif

#endif /* CATSIM_CATSIM_H */
