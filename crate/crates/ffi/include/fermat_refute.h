#ifndef FERMAT_REFUTE_H
#define FERMAT_REFUTE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call.
 */
typedef enum FrStatus {
  FR_OK = 0,
  /**
   * A required pointer argument was null.
   */
  FR_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  FR_INVALID_UTF8 = 2,
  /**
   * An argument could not be parsed or is out of range.
   */
  FR_INVALID_ARGUMENT = 3,
  /**
   * The search rejected its config or failed while running.
   */
  FR_SEARCH_FAILED = 4,
  /**
   * A certificate did not survive independent re-checking.
   */
  FR_RECHECK_FAILED = 5,
  /**
   * A Rust panic was caught at the boundary.
   */
  FR_PANIC = 6,
} FrStatus;

/**
 * A validated filter pipeline.
 */
typedef struct FrPipeline FrPipeline;

/**
 * A finished search.
 */
typedef struct FrReport FrReport;

/**
 * The outcome of evaluating one candidate.
 */
typedef struct FrVerdict FrVerdict;

/**
 * Headline counters of a search report.
 */
typedef struct FrCounts {
  uint64_t total_candidates;
  uint64_t refuted;
  uint64_t survivors_to_oracle;
  uint64_t oracle_solutions_found;
  uint64_t recheck_failures;
} FrCounts;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null after a
 * successful one. Valid until the next call on this thread.
 */
const char *fr_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` is null or was returned by this library and not yet freed.
 */
void fr_string_free(char *s);

/**
 * Builds a pipeline. `filters` is a comma-separated list of filter ids and
 * `moduli` a comma-separated list of moduli; null selects the defaults.
 *
 * # Safety
 * String arguments are null or NUL-terminated; `out` is writable.
 */
enum FrStatus fr_pipeline_new(const char *filters,
                              const char *moduli,
                              bool allow_external,
                              struct FrPipeline **out);

/**
 * # Safety
 * `pipeline` is null or came from [`fr_pipeline_new`] and is not yet freed.
 */
void fr_pipeline_free(struct FrPipeline *pipeline);

/**
 * Evaluates the candidate `(x, y, z, p)`; `p` must be an odd prime.
 *
 * # Safety
 * `pipeline` is a live handle, the numbers are NUL-terminated decimal
 * strings and `out` is writable.
 */
enum FrStatus fr_evaluate(const struct FrPipeline *pipeline,
                          const char *x,
                          const char *y,
                          const char *z,
                          const char *p,
                          struct FrVerdict **out);

/**
 * True when a filter refuted the candidate. Null gives false.
 *
 * # Safety
 * `verdict` is null or a live handle.
 */
bool fr_verdict_is_refuted(const struct FrVerdict *verdict);

/**
 * The certificate record as JSON, or `{"verdict":"inconclusive"}`.
 *
 * # Safety
 * `verdict` is a live handle and `out` is writable.
 */
enum FrStatus fr_verdict_to_json(const struct FrVerdict *verdict, char **out);

/**
 * # Safety
 * `verdict` is null or came from [`fr_evaluate`] and is not yet freed.
 */
void fr_verdict_free(struct FrVerdict *verdict);

/**
 * Exact test of `x^p + y^p = z^p` for any positive `p`.
 *
 * # Safety
 * The numbers are NUL-terminated decimal strings and `out` is writable.
 */
enum FrStatus fr_oracle_check(const char *x, const char *y, const char *z, uint32_t p, bool *out);

/**
 * Runs a search described by a JSON config document on `workers` threads
 * (0 is treated as 1).
 *
 * # Safety
 * `config_json` is NUL-terminated and `out` is writable.
 */
enum FrStatus fr_search_run(const char *config_json, uint32_t workers, struct FrReport **out);

/**
 * # Safety
 * `report` is a live handle and `out` is writable.
 */
enum FrStatus fr_report_counts(const struct FrReport *report, struct FrCounts *out);

/**
 * The report document as pretty JSON.
 *
 * # Safety
 * `report` is a live handle and `out` is writable.
 */
enum FrStatus fr_report_to_json(const struct FrReport *report, char **out);

/**
 * # Safety
 * `report` is null or came from [`fr_search_run`] and is not yet freed.
 */
void fr_report_free(struct FrReport *report);

/**
 * Independently re-checks one certificate record (a line of a certificate
 * stream). Returns `FR_RECHECK_FAILED` when the certificate does not hold.
 *
 * # Safety
 * `record_json` is NUL-terminated.
 */
enum FrStatus fr_recheck_record(const char *record_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FERMAT_REFUTE_H */
