#ifndef SHILOV_H
#define SHILOV_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ShStatus {
  SH_STATUS_OK = 0,
  SH_STATUS_NULL_ARGUMENT = 1,
  SH_STATUS_INVALID_INPUT = 2,
  SH_STATUS_NUMERICAL = 3,
  SH_STATUS_IO = 4,
  SH_STATUS_PANIC = 5,
} ShStatus;

/**
 * A validated metric specification.
 */
typedef struct ShMetric ShMetric;

/**
 * A homogeneous polynomial over the Hahn field.
 */
typedef struct ShPoly ShPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Owned by the
 * library; valid until the next call.
 */
const char *sh_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void sh_string_free(char *s);

/**
 * Parses an experiment file body. `json` selects JSON instead of TOML.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum ShStatus sh_metric_parse(const char *text, bool json, struct ShMetric **out);

/**
 * # Safety
 * `m` must be NULL or a handle from [`sh_metric_parse`], not yet freed.
 */
void sh_metric_free(struct ShMetric *m);

/**
 * Projective dimension, or 0 for a NULL handle.
 *
 * # Safety
 * `m` must be NULL or a live handle.
 */
size_t sh_metric_dim(const struct ShMetric *m);

/**
 * # Safety
 * `m` must be NULL or a live handle.
 */
size_t sh_metric_len(const struct ShMetric *m);

/**
 * Parses a homogeneous polynomial in `x0..x{nvars-1}`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum ShStatus sh_poly_parse(const char *text, size_t nvars, struct ShPoly **out);

/**
 * # Safety
 * `p` must be NULL or a handle from [`sh_poly_parse`], not yet freed.
 */
void sh_poly_free(struct ShPoly *p);

/**
 * Valuation `-log |f|` of the sup norm, as a rational string or `inf`.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum ShStatus sh_spec_val(const struct ShMetric *m, const struct ShPoly *f, char **out);

/**
 * Writes the Shilov point indices into `buf` (capacity `cap`) and their
 * number into `len`. If `cap` is too small only `len` is written.
 *
 * # Safety
 * `m` must be live; `buf` must hold `cap` entries; `len` must be writable.
 */
enum ShStatus sh_shilov_set(const struct ShMetric *m, size_t *buf, size_t cap, size_t *len);

/**
 * Equidistribution measure as JSON.
 *
 * # Safety
 * `m` must be live; `out` must be writable.
 */
enum ShStatus sh_eq_measure_json(const struct ShMetric *m, char **out);

/**
 * Convergence report for degrees `1..=nmax` as CSV.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum ShStatus sh_limit_csv(const struct ShMetric *m,
                           const struct ShPoly *f,
                           size_t nmax,
                           char **out);

/**
 * Shifts of the metric's weight vectors realizing `target`, a
 * comma-separated list of rationals. Result as JSON.
 *
 * # Safety
 * `m` must be live; `target` NUL-terminated; `out` writable.
 */
enum ShStatus sh_solve_json(const struct ShMetric *m, const char *target, double tol, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SHILOV_H */
