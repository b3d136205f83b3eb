#ifndef MEROSTAR_H
#define MEROSTAR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MsClass {
  MS_CLASS_ME = 0,
  MS_CLASS_MF = 1,
  MS_CLASS_STARLIKE = 2,
  MS_CLASS_TME = 3,
} MsClass;

typedef enum MsMembership {
  MS_MEMBERSHIP_CERTIFIED_MEMBER = 0,
  MS_MEMBERSHIP_SAMPLED_MEMBER = 1,
  MS_MEMBERSHIP_NON_MEMBER = 2,
  MS_MEMBERSHIP_INDETERMINATE = 3,
} MsMembership;

typedef enum MsStatus {
  MS_STATUS_OK = 0,
  MS_STATUS_NULL_POINTER = 1,
  MS_STATUS_INVALID_ARGUMENT = 2,
  MS_STATUS_NON_FINITE = 3,
  MS_STATUS_PARSE = 4,
  MS_STATUS_IO = 5,
  MS_STATUS_PANIC = 6,
} MsStatus;

/**
 * Opaque polar sampling grid.
 */
typedef struct MsGrid MsGrid;

/**
 * Opaque truncated Laurent series.
 */
typedef struct MsSeries MsSeries;

typedef struct MsVerdict {
  enum MsMembership status;
  double min_margin;
  /**
   * Nonzero when `witness_re`/`witness_im` hold the minimizing point.
   */
  int32_t has_witness;
  double witness_re;
  double witness_im;
  size_t samples_checked;
  size_t degenerate;
} MsVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failing call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *ms_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ms_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void ms_string_free(char *s);

/**
 * Builds `1/z + sum_n (re[n] + i im[n]) z^n` for `n < len`. `im` may be
 * null for real coefficients; both may be null when `len == 0`.
 *
 * # Safety
 * `re` and `im` (when non-null) must point to `len` readable doubles.
 */
enum MsStatus ms_series_new(const double *re, const double *im, size_t len, struct MsSeries **out);

/**
 * Parses a `{"coeffs": [[re, im], ...]}` document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum MsStatus ms_series_from_json(const char *json, struct MsSeries **out);

/**
 * Serializes a series; free the result with [`ms_string_free`].
 *
 * # Safety
 * `series` must be a live handle; `out` must be writable.
 */
enum MsStatus ms_series_to_json(const struct MsSeries *series, char **out);

/**
 * Number of stored tail coefficients; 0 for null.
 *
 * # Safety
 * `series` must be null or a live handle.
 */
size_t ms_series_len(const struct MsSeries *series);

/**
 * # Safety
 * `series` must be null or a handle not yet freed.
 */
void ms_series_free(struct MsSeries *series);

/**
 * Evaluates `g(z) = z f(z)`.
 *
 * # Safety
 * `series` must be a live handle; `out_re` and `out_im` must be writable.
 */
enum MsStatus ms_series_eval_g(const struct MsSeries *series,
                               double re,
                               double im,
                               double *out_re,
                               double *out_im);

/**
 * Default grid: twelve radii up to 0.9999, 2048 angles each.
 *
 * # Safety
 * `out` must be writable.
 */
enum MsStatus ms_grid_default(struct MsGrid **out);

/**
 * Grid over strictly increasing `radii` in `(0, 1)`.
 *
 * # Safety
 * `radii` must point to `len` readable doubles; `out` must be writable.
 */
enum MsStatus ms_grid_new(const double *radii,
                          size_t len,
                          size_t angular_samples,
                          struct MsGrid **out);

/**
 * # Safety
 * `grid` must be null or a handle not yet freed.
 */
void ms_grid_free(struct MsGrid *grid);

/**
 * Sampled membership check. `Tme` is scanned with the ME functional.
 *
 * # Safety
 * `series` and `grid` must be live handles; `out` must be writable.
 */
enum MsStatus ms_check(const struct MsSeries *series,
                       enum MsClass class_,
                       double alpha,
                       const struct MsGrid *grid,
                       struct MsVerdict *out);

/**
 * Sharp bound on `|a_n|` over ME(alpha).
 *
 * # Safety
 * `out` must be writable.
 */
enum MsStatus ms_coeff_bound(double alpha, size_t n, double *out);

/**
 * Coefficient-sum sufficient condition for ME(alpha). Writes 1 or 0 to
 * `holds` and `1 - sum` to `margin`.
 *
 * # Safety
 * `series` must be a live handle; `holds` and `margin` must be writable.
 */
enum MsStatus ms_coeff_sufficient_me(const struct MsSeries *series,
                                     double alpha,
                                     int32_t *holds,
                                     double *margin);

/**
 * Runs a named suite with default parameters and writes its JSON report.
 * `grid` may be null for the default grid. `passed` (optional) receives 1
 * when no check failed.
 *
 * # Safety
 * `name` must be a NUL-terminated string, `grid` null or a live handle,
 * `out_json` writable, `passed` null or writable.
 */
enum MsStatus ms_run_suite(const char *name,
                           uint64_t seed,
                           const struct MsGrid *grid,
                           char **out_json,
                           int32_t *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MEROSTAR_H */
