/* Copyright The dgtd Authors */
/* SPDX-License-Identifier: Apache-2.0 */

/* C interface of the dgtd solver. All functions return a dgtd_status; the
 * message of the last failure on the calling thread is available through
 * dgtd_last_error. Handles are opaque and owned by the caller. */

#ifndef DGTD_DGTD_H
#define DGTD_DGTD_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define DGTD_API __declspec(dllexport)
#else
#define DGTD_API __attribute__((visibility("default")))
#endif

typedef enum dgtd_status
{
  DGTD_OK = 0,
  DGTD_INVALID_ARGUMENT = 1,
  DGTD_CONFIG = 2,
  DGTD_INSTABILITY = 3,
  DGTD_IO = 4,
  DGTD_MESH = 5,
  DGTD_INTERNAL = 6
} dgtd_status;

typedef struct dgtd_config dgtd_config;
typedef struct dgtd_simulation dgtd_simulation;

typedef struct dgtd_run_summary
{
  long steps;
  double time;
  double tau;
  int elements;
  long dofs;
  double initial_energy;
  double final_energy;
  double max_energy;
  double final_interior_energy;
  double wall_seconds;
} dgtd_run_summary;

DGTD_API const char *dgtd_version(void);
DGTD_API const char *dgtd_status_string(dgtd_status status);
/* Message of the last failure on this thread, "" if none. */
DGTD_API const char *dgtd_last_error(void);

/* Configuration. */
DGTD_API dgtd_status dgtd_config_load(const char *path, dgtd_config **out);
DGTD_API dgtd_status dgtd_config_parse(const char *text, dgtd_config **out);
/* Sets one key of the file format, e.g. ("pml", "sigma", "5"), and revalidates. */
DGTD_API dgtd_status dgtd_config_set(dgtd_config *config, const char *section, const char *key,
                                     const char *value);
/* Copies the canonical text into buffer (NUL-terminated, truncated to
 * capacity); *needed receives the full length including the terminator. */
DGTD_API dgtd_status dgtd_config_dump(const dgtd_config *config, char *buffer, size_t capacity,
                                      size_t *needed);
/* Documentation of every key, static storage. */
DGTD_API const char *dgtd_config_reference(void);
DGTD_API void dgtd_config_free(dgtd_config *config);

/* Commands. out_dir may be NULL to use the configured directory. */
DGTD_API dgtd_status dgtd_run(const dgtd_config *config, const char *out_dir,
                              dgtd_run_summary *summary);
DGTD_API dgtd_status dgtd_convergence(const dgtd_config *config, int pmin, int pmax,
                                      const char *csv_path);
/* sigmas may be NULL (count 0) to use the configured sweep. *best_sigma and
 * *best_relative (may be NULL) receive the best sweep point. */
DGTD_API dgtd_status dgtd_pml_test(const dgtd_config *config, const double *sigmas, int count,
                                   const char *out_dir, double *best_sigma, double *best_relative);
DGTD_API dgtd_status dgtd_info(const dgtd_config *config, uint64_t seed, char *buffer,
                               size_t capacity, size_t *needed);

/* Step-by-step access. */
DGTD_API dgtd_status dgtd_simulation_create(const dgtd_config *config, dgtd_simulation **out);
DGTD_API dgtd_status dgtd_simulation_step(dgtd_simulation *sim, long steps);
DGTD_API dgtd_status dgtd_simulation_energy(const dgtd_simulation *sim, double *energy);
DGTD_API dgtd_status dgtd_simulation_time(const dgtd_simulation *sim, double *time, long *step);
DGTD_API dgtd_status dgtd_simulation_tau(const dgtd_simulation *sim, double *tau);
/* Field values at a physical point: e[3] and h[3] (h averaged to the e level). */
DGTD_API dgtd_status dgtd_simulation_sample(const dgtd_simulation *sim, const double x[3],
                                            double e[3], double h[3]);
DGTD_API void dgtd_simulation_free(dgtd_simulation *sim);

#ifdef __cplusplus
}
#endif

#endif /* DGTD_DGTD_H */
