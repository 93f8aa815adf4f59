#ifndef FCSERIES_H
#define FCSERIES_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FcsRoute {
  FCS_ROUTE_SERIES = 0,
  FCS_ROUTE_QUADRATURE = 1,
  FCS_ROUTE_CLOSED_FORM = 2,
  /**
   * Series for small radii, closed form otherwise, quadrature as fallback.
   */
  FCS_ROUTE_AUTO = 3,
} FcsRoute;

typedef enum FcsScanKind {
  FCS_SCAN_KIND_CONSISTENCY = 0,
  FCS_SCAN_KIND_MONOTONICITY = 1,
  FCS_SCAN_KIND_INEQUALITY = 2,
  FCS_SCAN_KIND_IDENTITY = 3,
} FcsScanKind;

/**
 * Status codes. Values 2 and 3 match the CLI exit codes for the same failures.
 */
typedef enum FcsStatus {
  FCS_STATUS_OK = 0,
  FCS_STATUS_NULL_POINTER = 1,
  FCS_STATUS_DOMAIN = 2,
  FCS_STATUS_TOLERANCE_UNREACHABLE = 3,
  FCS_STATUS_UNSUPPORTED_PARAMETERS = 4,
  FCS_STATUS_INVALID_GRID = 5,
  FCS_STATUS_PANIC = 6,
} FcsStatus;

/**
 * Evaluation settings: a route and a tolerance.
 */
typedef struct FcsEvaluator FcsEvaluator;

/**
 * A finished scan report.
 */
typedef struct FcsReport FcsReport;

typedef struct FcsEvalResult {
  double value;
  double error_bound;
  /**
   * Route that produced the value; never `FCS_ROUTE_AUTO`.
   */
  enum FcsRoute route;
  /**
   * Series terms or quadrature panels.
   */
  uint64_t work;
  /**
   * False when `error_bound` is a rounding budget rather than a proof.
   */
  bool rigorous;
} FcsEvalResult;

/**
 * Grid bounds. The variable is `x` for consistency and monotonicity scans
 * and `phi` (radians) for inequality scans.
 */
typedef struct FcsGrid {
  double var_min;
  double var_max;
  size_t var_count;
  double r_min;
  double r_max;
  size_t r_count;
  double inset;
} FcsGrid;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *fcs_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *fcs_version(void);

/**
 * Creates an evaluator. `tol` is the requested absolute accuracy.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum FcsStatus fcs_evaluator_new(enum FcsRoute route, double tol, struct FcsEvaluator **out);

/**
 * Releases an evaluator. NULL is ignored.
 *
 * # Safety
 * `ev` must come from [`fcs_evaluator_new`] and not have been freed.
 */
void fcs_evaluator_free(struct FcsEvaluator *ev);

/**
 * Evaluates `f(x, r)`.
 *
 * # Safety
 * `ev` must be a live evaluator and `out` writable.
 */
enum FcsStatus fcs_eval_x(const struct FcsEvaluator *ev,
                          double x,
                          double r,
                          struct FcsEvalResult *out);

/**
 * Evaluates the angle form `Σ (−1)^{k+1} r^k cos(kφ)/(k+2)`, `φ` in radians.
 *
 * # Safety
 * `ev` must be a live evaluator and `out` writable.
 */
enum FcsStatus fcs_eval_phi(const struct FcsEvaluator *ev,
                            double phi,
                            double r,
                            struct FcsEvalResult *out);

/**
 * Evaluates `∂f/∂x(x, r)` by quadrature at the evaluator's tolerance.
 *
 * # Safety
 * `ev` must be a live evaluator and `out` writable.
 */
enum FcsStatus fcs_eval_dfdx(const struct FcsEvaluator *ev,
                             double x,
                             double r,
                             struct FcsEvalResult *out);

/**
 * `f(1, r) − f(cos φ, r)` for `φ ∈ (0, π)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum FcsStatus fcs_margin(double phi, double r, double *out);

/**
 * Fills `out` with the default grid for `kind`.
 *
 * # Safety
 * `out` must be writable.
 */
enum FcsStatus fcs_default_grid(enum FcsScanKind kind, struct FcsGrid *out);

/**
 * Runs a scan. `grid` may be NULL for the default grid of `kind`; the
 * identity scan only accepts NULL.
 *
 * # Safety
 * `grid` must be NULL or readable; `out` must be writable.
 */
enum FcsStatus fcs_scan(enum FcsScanKind kind,
                        const struct FcsGrid *grid,
                        double tol,
                        struct FcsReport **out);

/**
 * # Safety
 * `rep` must be NULL or a live report.
 */
bool fcs_report_passed(const struct FcsReport *rep);

/**
 * # Safety
 * `rep` must be NULL or a live report.
 */
size_t fcs_report_points_checked(const struct FcsReport *rep);

/**
 * # Safety
 * `rep` must be NULL or a live report.
 */
size_t fcs_report_violation_count(const struct FcsReport *rep);

/**
 * Smallest margin seen; NaN for a NULL report.
 *
 * # Safety
 * `rep` must be NULL or a live report.
 */
double fcs_report_min_margin(const struct FcsReport *rep);

/**
 * # Safety
 * `rep` must be a live report; `var` and `r` must be writable.
 */
enum FcsStatus fcs_report_worst_point(const struct FcsReport *rep, double *var, double *r);

/**
 * The report as JSON with `precision` significant digits (1 to 17).
 * Returns NULL on bad arguments; free the result with [`fcs_string_free`].
 *
 * # Safety
 * `rep` must be NULL or a live report.
 */
char *fcs_report_to_json(const struct FcsReport *rep, uint8_t precision);

/**
 * Releases a report. NULL is ignored.
 *
 * # Safety
 * `rep` must come from [`fcs_scan`] and not have been freed.
 */
void fcs_report_free(struct FcsReport *rep);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void fcs_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* FCSERIES_H */
