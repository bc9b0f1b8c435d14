#ifndef TROPICOUNT_H
#define TROPICOUNT_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TcStatus {
  TC_STATUS_OK = 0,
  /**
   * Malformed input or a validation failure.
   */
  TC_STATUS_INVALID_INPUT = 1,
  /**
   * Constraints stayed special after every resampling attempt.
   */
  TC_STATUS_NON_GENERIC = 2,
  /**
   * A consistency check reported a mismatch.
   */
  TC_STATUS_MISMATCH = 3,
  TC_STATUS_NULL_POINTER = 4,
  /**
   * The library panicked; the message is in [`tc_last_error`].
   */
  TC_STATUS_INTERNAL = 5,
} TcStatus;

/**
 * The result of [`tc_count`].
 */
typedef struct TcCountResult TcCountResult;

/**
 * A parsed problem file plus parameter and option overrides.
 */
typedef struct TcProblem TcProblem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or NULL. The pointer stays
 * valid until the next call into the library from the same thread.
 */
const char *tc_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void tc_string_free(char *s);

/**
 * Parses a problem file.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum TcStatus tc_problem_from_json(const char *json, struct TcProblem **out);

/**
 * # Safety
 * `p` must be NULL or a handle from [`tc_problem_from_json`], not yet freed.
 */
void tc_problem_free(struct TcProblem *p);

/**
 * Sets a named integer parameter used by the constraint directions.
 *
 * # Safety
 * `p` must be a live problem handle and `name` a NUL-terminated string.
 */
enum TcStatus tc_problem_set_param(struct TcProblem *p, const char *name, int64_t value);

/**
 * Overrides seed, resampling and thread count. `threads = 0` uses all cores.
 *
 * # Safety
 * `p` must be a live problem handle.
 */
enum TcStatus tc_problem_set_options(struct TcProblem *p,
                                     uint64_t seed,
                                     bool allow_resample,
                                     uintptr_t threads);

/**
 * Counts the curves of a problem.
 *
 * # Safety
 * `p` must be a live problem handle; `out` must be writable.
 */
enum TcStatus tc_count(const struct TcProblem *p, struct TcCountResult **out);

/**
 * # Safety
 * `r` must be NULL or a handle from [`tc_count`], not yet freed.
 */
void tc_result_free(struct TcCountResult *r);

/**
 * Number of curves found, or 0 for NULL.
 *
 * # Safety
 * `r` must be NULL or a live result handle.
 */
uintptr_t tc_result_num_curves(const struct TcCountResult *r);

/**
 * The weighted total as a decimal string.
 *
 * # Safety
 * `r` must be a live result handle; `out` must be writable.
 */
enum TcStatus tc_result_total(const struct TcCountResult *r, char **out);

/**
 * The full result as JSON.
 *
 * # Safety
 * `r` must be a live result handle; `out` must be writable.
 */
enum TcStatus tc_result_to_json(const struct TcCountResult *r, char **out);

/**
 * Plane identity check for every curve of a plane problem, as JSON.
 * Returns `Mismatch` (with the table still written) if any row differs.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum TcStatus tc_check2d_json(const char *json, char **out);

/**
 * Adapted decomposition for curves and a fan, as JSON.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum TcStatus tc_decompose_json(const char *json, char **out);

/**
 * Plane curve numbers N_1..N_dmax as a JSON array of integers.
 *
 * # Safety
 * `out` must be writable.
 */
enum TcStatus tc_oracle_json(uintptr_t dmax, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TROPICOUNT_H */
