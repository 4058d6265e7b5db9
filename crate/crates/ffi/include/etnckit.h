#ifndef ETNCKIT_H
#define ETNCKIT_H

/* Generated by build.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every fallible entry point.
 */
typedef enum EtnckitError {
  ETNCKIT_ERROR_OK = 0,
  ETNCKIT_ERROR_NULL_POINTER = 1,
  ETNCKIT_ERROR_INVALID_UTF8 = 2,
  ETNCKIT_ERROR_PARSE = 3,
  ETNCKIT_ERROR_INVALID_INPUT = 4,
  ETNCKIT_ERROR_ARITHMETIC = 5,
  ETNCKIT_ERROR_OUT_OF_RANGE = 6,
  ETNCKIT_ERROR_PANIC = 99,
} EtnckitError;

/**
 * Outcome of one job, mirroring the report's status field.
 */
typedef enum EtnckitStatus {
  ETNCKIT_STATUS_PASS = 0,
  ETNCKIT_STATUS_FAIL = 1,
  ETNCKIT_STATUS_SKIPPED_BUDGET = 2,
  ETNCKIT_STATUS_ERROR = 3,
} EtnckitStatus;

/**
 * An exact element of a cyclotomic field.
 */
typedef struct EtnckitCyclotomic EtnckitCyclotomic;

/**
 * The reports of a finished run, in job order.
 */
typedef struct EtnckitRun EtnckitRun;

/**
 * A parsed verification spec.
 */
typedef struct EtnckitSpec EtnckitSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message for the last failure on this thread, or NULL. Valid until the next call on this thread.
 */
const char *etnckit_last_error(void);

/**
 * Frees a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void etnckit_string_free(char *s);

/**
 * Number of implemented checks.
 */
size_t etnckit_check_count(void);

/**
 * Name of check `index` as a static NUL-terminated string, or NULL when out of range.
 */
const char *etnckit_check_name(size_t index);

/**
 * Parses a spec (JSON, or TOML when `toml` is true) and validates every job's parameters.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum EtnckitError etnckit_spec_parse(const char *text, bool toml, struct EtnckitSpec **out);

/**
 * # Safety
 * `spec` must be a live handle; `out` must be writable.
 */
enum EtnckitError etnckit_spec_job_count(const struct EtnckitSpec *spec, size_t *out);

/**
 * # Safety
 * `spec` must be NULL or a handle from `etnckit_spec_parse` that has not been freed.
 */
void etnckit_spec_free(struct EtnckitSpec *spec);

/**
 * Runs every job of `spec`. `budget_terms` of 0 selects the default term budget.
 * `seed_override` replaces every job seed when `use_seed_override` is true.
 *
 * # Safety
 * `spec` must be a live handle; `out` must be writable.
 */
enum EtnckitError etnckit_run(const struct EtnckitSpec *spec,
                              uint64_t budget_terms,
                              bool use_seed_override,
                              uint64_t seed_override,
                              struct EtnckitRun **out);

/**
 * # Safety
 * `run` must be a live handle; `out` must be writable.
 */
enum EtnckitError etnckit_run_len(const struct EtnckitRun *run, size_t *out);

/**
 * # Safety
 * `run` must be a live handle; `out` must be writable.
 */
enum EtnckitError etnckit_run_status(const struct EtnckitRun *run,
                                     size_t index,
                                     enum EtnckitStatus *out);

/**
 * The JSON report of job `index`, byte-identical to the CLI's report file.
 * Free the result with `etnckit_string_free`.
 *
 * # Safety
 * `run` must be a live handle; `out` must be writable.
 */
enum EtnckitError etnckit_run_report_json(const struct EtnckitRun *run, size_t index, char **out);

/**
 * The CLI exit code for this run: 0 on success, 1 when a job failed (or was skipped under `strict`).
 *
 * # Safety
 * `run` must be a live handle; `out` must be writable.
 */
enum EtnckitError etnckit_run_exit_code(const struct EtnckitRun *run,
                                        bool strict,
                                        int32_t *out);

/**
 * # Safety
 * `run` must be NULL or a handle from `etnckit_run` that has not been freed.
 */
void etnckit_run_free(struct EtnckitRun *run);

/**
 * Reads `{"order": N, "coeffs": ["p/q", ...]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum EtnckitError etnckit_cyclotomic_from_json(const char *json, struct EtnckitCyclotomic **out);

/**
 * zeta_n^k.
 *
 * # Safety
 * `out` must be writable.
 */
enum EtnckitError etnckit_cyclotomic_root_of_unity(uint64_t n,
                                                   int64_t k,
                                                   struct EtnckitCyclotomic **out);

/**
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum EtnckitError etnckit_cyclotomic_add(const struct EtnckitCyclotomic *a,
                                         const struct EtnckitCyclotomic *b,
                                         struct EtnckitCyclotomic **out);

/**
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum EtnckitError etnckit_cyclotomic_mul(const struct EtnckitCyclotomic *a,
                                         const struct EtnckitCyclotomic *b,
                                         struct EtnckitCyclotomic **out);

/**
 * Fails with `Arithmetic` when `b` is zero.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum EtnckitError etnckit_cyclotomic_div(const struct EtnckitCyclotomic *a,
                                         const struct EtnckitCyclotomic *b,
                                         struct EtnckitCyclotomic **out);

/**
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum EtnckitError etnckit_cyclotomic_equal(const struct EtnckitCyclotomic *a,
                                           const struct EtnckitCyclotomic *b,
                                           bool *out);

/**
 * Canonical JSON form. Free the result with `etnckit_string_free`.
 *
 * # Safety
 * `a` must be a live handle; `out` must be writable.
 */
enum EtnckitError etnckit_cyclotomic_to_json(const struct EtnckitCyclotomic *a, char **out);

/**
 * Image under the embedding zeta_n -> exp(2 pi i / n).
 *
 * # Safety
 * `a` must be a live handle; `re` and `im` must be writable.
 */
enum EtnckitError etnckit_cyclotomic_to_complex(const struct EtnckitCyclotomic *a,
                                                double *re,
                                                double *im);

/**
 * # Safety
 * `a` must be NULL or a live handle from this library.
 */
void etnckit_cyclotomic_free(struct EtnckitCyclotomic *a);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ETNCKIT_H */
