#ifndef MMDESCEND_H
#define MMDESCEND_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MmdDescentStatus {
  MMD_DESCENT_STATUS_SUCCESS = 0,
  MMD_DESCENT_STATUS_NO_SOLUTION = 1,
  MMD_DESCENT_STATUS_INCONCLUSIVE = 2,
} MmdDescentStatus;

/**
 * Result code of every fallible call.
 */
typedef enum MmdStatus {
  MMD_STATUS_OK = 0,
  MMD_STATUS_NULL_POINTER = 1,
  MMD_STATUS_INVALID_UTF8 = 2,
  MMD_STATUS_PARSE = 3,
  MMD_STATUS_BRENT_VIOLATION = 4,
  MMD_STATUS_NOT_RATIONAL = 5,
  MMD_STATUS_NO_OBSTRUCTION = 6,
  MMD_STATUS_NO_RESULT = 7,
  MMD_STATUS_IO = 8,
  MMD_STATUS_INTERNAL = 9,
} MmdStatus;

typedef enum MmdVariant {
  MMD_VARIANT_OPQ = 0,
  MMD_VARIANT_PQO = 1,
  MMD_VARIANT_QOP = 2,
} MmdVariant;

/**
 * Opaque descent result handle.
 */
typedef struct MmdOutcome MmdOutcome;

/**
 * Opaque scheme handle.
 */
typedef struct MmdScheme MmdScheme;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call into this library from the same thread.
 */
const char *mmd_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *mmd_version(void);

/**
 * Parses a scheme document (triple or encoding form). Does not run the Brent check.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum MmdStatus mmd_scheme_from_json(const char *json, struct MmdScheme **out);

/**
 * Loads a scheme document from a file. Does not run the Brent check.
 *
 * # Safety
 * `path` must be a nul-terminated string and `out` a valid pointer.
 */
enum MmdStatus mmd_scheme_load(const char *path, struct MmdScheme **out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards. Null is ignored.
 */
void mmd_scheme_free(struct MmdScheme *s);

/**
 * Writes `<m, n, p>` and the rank `r`.
 *
 * # Safety
 * All pointers must be valid.
 */
enum MmdStatus mmd_scheme_dims(const struct MmdScheme *s,
                               size_t *m,
                               size_t *n,
                               size_t *p,
                               size_t *r);

/**
 * `Ok` when every Brent equation holds, `BrentViolation` otherwise.
 *
 * # Safety
 * `s` must be a valid handle.
 */
enum MmdStatus mmd_scheme_verify(const struct MmdScheme *s);

/**
 * Writes 1 to `out` if every entry is rational, else 0.
 *
 * # Safety
 * `s` and `out` must be valid.
 */
enum MmdStatus mmd_scheme_is_rational(const struct MmdScheme *s, int32_t *out);

/**
 * Canonical triple-form JSON.
 *
 * # Safety
 * `s` and `out` must be valid.
 */
enum MmdStatus mmd_scheme_to_json(const struct MmdScheme *s, char **out);

/**
 * Runs the descent. `height` and `comb` of 0 select the defaults. The outcome
 * handle is written even when no rational scheme was found.
 *
 * # Safety
 * `s` and `out` must be valid.
 */
enum MmdStatus mmd_descend(const struct MmdScheme *s,
                           uint64_t height,
                           int64_t comb,
                           struct MmdOutcome **out);

/**
 * # Safety
 * `o` must be a valid handle.
 */
enum MmdDescentStatus mmd_outcome_status(const struct MmdOutcome *o);

/**
 * JSON report with status, transform and certificate.
 *
 * # Safety
 * `o` and `out` must be valid.
 */
enum MmdStatus mmd_outcome_report_json(const struct MmdOutcome *o, char **out);

/**
 * The rational scheme of a successful descent, as a new handle.
 *
 * # Safety
 * `o` and `out` must be valid.
 */
enum MmdStatus mmd_outcome_result(const struct MmdOutcome *o, struct MmdScheme **out);

/**
 * # Safety
 * `o` must come from this library and not be used afterwards. Null is ignored.
 */
void mmd_outcome_free(struct MmdOutcome *o);

/**
 * Searches products up to length `depth` for a non-integral trace. Returns
 * `Ok` with a witness, `NoObstruction` when none exists up to `depth`; the
 * JSON report is written in both cases.
 *
 * # Safety
 * `s` and `report` must be valid.
 */
enum MmdStatus mmd_obstruct(const struct MmdScheme *s,
                            enum MmdVariant variant,
                            size_t depth,
                            char **report);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards. Null is ignored.
 */
void mmd_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MMDESCEND_H */
