#ifndef PLATOON_GAME_H
#define PLATOON_GAME_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum PgStatus {
  PG_STATUS_OK = 0,
  PG_STATUS_NULL_ARGUMENT = 1,
  PG_STATUS_INVALID_UTF8 = 2,
  PG_STATUS_IO = 3,
  PG_STATUS_PARSE = 4,
  PG_STATUS_VALIDATION = 5,
  PG_STATUS_POLICY = 6,
  PG_STATUS_GUARD = 7,
  PG_STATUS_PANIC = 8,
} PgStatus;

/**
 * The result of one learning run.
 */
typedef struct PgOutcome PgOutcome;

/**
 * A loaded scenario.
 */
typedef struct PgScenario PgScenario;

/**
 * Scalar part of a run summary.
 */
typedef struct PgSummary {
  double s_nash;
  double s_optimal;
  double s_preference;
  double ratio_nash;
  double ratio_preference;
  uint64_t iterations;
  /**
   * Day of certification, or -1 when the run did not certify.
   */
  int64_t certified_at;
  bool converged;
  uint32_t max_truck_concentration;
} PgSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *pg_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *pg_version(void);

/**
 * Loads and validates a scenario file.
 *
 * # Safety
 * `path` must be a valid NUL-terminated string and `out` a valid pointer
 * to writable storage for one handle.
 */
enum PgStatus pg_scenario_load(const char *path, struct PgScenario **out);

/**
 * Parses and validates a scenario from a JSON document.
 *
 * # Safety
 * Same contract as [`pg_scenario_load`], with `json` holding the document.
 */
enum PgStatus pg_scenario_from_json(const char *json, struct PgScenario **out);

/**
 * The built-in default scenario. Never NULL.
 */
struct PgScenario *pg_scenario_paper_default(void);

/**
 * # Safety
 * `scenario` must be NULL or a handle from this library not yet freed.
 */
void pg_scenario_free(struct PgScenario *scenario);

/**
 * # Safety
 * `scenario` must be a live handle.
 */
enum PgStatus pg_scenario_set_seed(struct PgScenario *scenario, uint64_t seed);

/**
 * # Safety
 * `scenario` must be a live handle.
 */
enum PgStatus pg_scenario_set_max_iters(struct PgScenario *scenario, uint64_t max_iters);

/**
 * Serializes the scenario to JSON. Free the string with [`pg_string_free`].
 *
 * # Safety
 * `scenario` must be a live handle and `out` writable.
 */
enum PgStatus pg_scenario_to_json(const struct PgScenario *scenario, char **out);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library not yet freed.
 */
void pg_string_free(char *s);

/**
 * Samples the population and runs the configured learner. A run that
 * stops at the iteration cap still succeeds; check `converged`.
 *
 * # Safety
 * `scenario` must be a live handle and `out` writable.
 */
enum PgStatus pg_run(const struct PgScenario *scenario, struct PgOutcome **out);

/**
 * # Safety
 * `outcome` must be NULL or a handle from [`pg_run`] not yet freed.
 */
void pg_outcome_free(struct PgOutcome *outcome);

/**
 * # Safety
 * `outcome` must be a live handle and `out` writable.
 */
enum PgStatus pg_outcome_summary(const struct PgOutcome *outcome, struct PgSummary *out);

/**
 * Number of intervals, the length expected by [`pg_outcome_final_occupancy`].
 *
 * # Safety
 * `outcome` must be NULL or a live handle; NULL yields 0.
 */
size_t pg_outcome_intervals(const struct PgOutcome *outcome);

/**
 * Copies the final vehicle and truck counts per interval.
 *
 * # Safety
 * `vehicles` and `trucks` must each point to `len` writable `uint32_t`.
 */
enum PgStatus pg_outcome_final_occupancy(const struct PgOutcome *outcome,
                                         uint32_t *vehicles,
                                         uint32_t *trucks,
                                         size_t len);

/**
 * Writes the scenario's output files for this run into `dir`.
 *
 * # Safety
 * `outcome` must be a live handle and `dir` a NUL-terminated path.
 */
enum PgStatus pg_outcome_emit(const struct PgOutcome *outcome, const char *dir);

/**
 * Best achievable worst-interval velocity for the given counts.
 */
double pg_optimal_social_cost(size_t cars, size_t trucks, size_t intervals, double a, double b);

/**
 * Runs `trials` random unilateral deviations and stores the largest
 * mismatch between potential and utility changes in `max_error`. Fails
 * with `Policy` when the scenario's pricing has no potential.
 *
 * # Safety
 * `scenario` must be a live handle and `max_error` writable.
 */
enum PgStatus pg_verify_potential(const struct PgScenario *scenario,
                                  uint64_t trials,
                                  double *max_error);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PLATOON_GAME_H */
