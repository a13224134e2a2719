/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef PDW_H
#define PDW_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PdwStatus {
  PDW_STATUS_OK = 0,
  PDW_STATUS_INVALID_ARGUMENT = 1,
  PDW_STATUS_UNCERTIFIED = 2,
  PDW_STATUS_PROPERTY_VIOLATION = 3,
  PDW_STATUS_NULL_POINTER = 4,
  PDW_STATUS_NUMERICAL = 5,
  PDW_STATUS_PANIC = 6,
} PdwStatus;

typedef enum PdwShape {
  PDW_SHAPE_CUBE = 0,
  PDW_SHAPE_BALL = 1,
} PdwShape;

/**
 * Opaque origin-symmetric convex body.
 */
typedef struct PdwDomain PdwDomain;

/**
 * Opaque trigonometric polynomial.
 */
typedef struct PdwPoly PdwPoly;

/**
 * Opaque two-sided bound report.
 */
typedef struct PdwReport PdwReport;

typedef struct PdwTuranResult {
  double lower;
  double upper;
  double min_residual;
  size_t grid_size;
  size_t freq_bound;
  bool certified;
} PdwTuranResult;

typedef struct PdwDelsarteResult {
  double value;
  double fourier_min;
  double spatial_max;
  double tail_envelope;
  bool certified;
} PdwDelsarteResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failing call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *pdw_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *pdw_version(void);

/**
 * Creates a cube `[-delta, delta]^dim` or a ball of radius `delta`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum PdwStatus pdw_domain_new(enum PdwShape shape,
                              size_t dim,
                              double delta,
                              struct PdwDomain **out);

/**
 * # Safety
 * `domain` must come from [`pdw_domain_new`] and not be used afterwards.
 */
void pdw_domain_free(struct PdwDomain *domain);

/**
 * `|D|`.
 *
 * # Safety
 * `domain` must be a live handle and `out` valid for writes.
 */
enum PdwStatus pdw_domain_volume(const struct PdwDomain *domain, double *out);

/**
 * Builds a real-coefficient polynomial from `count` terms; `freqs` holds
 * `count * dim` integers, row by row.
 *
 * # Safety
 * `freqs` and `coeffs` must point to arrays of the stated lengths and `out`
 * must be valid for writes.
 */
enum PdwStatus pdw_poly_from_real_coeffs(size_t dim,
                                         const int64_t *freqs,
                                         const double *coeffs,
                                         size_t count,
                                         struct PdwPoly **out);

/**
 * Seeded random positive definite polynomial.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum PdwStatus pdw_poly_random_pd(uint64_t seed,
                                  size_t dim,
                                  uint32_t degree,
                                  double decay,
                                  struct PdwPoly **out);

/**
 * # Safety
 * `poly` must come from a `pdw_poly_*` constructor and not be used afterwards.
 */
void pdw_poly_free(struct PdwPoly *poly);

/**
 * `∫_{𝕋ⁿ}|f|²`.
 *
 * # Safety
 * `poly` must be a live handle and `out` valid for writes.
 */
enum PdwStatus pdw_poly_norm_sq_torus(const struct PdwPoly *poly, double *out);

/**
 * Rayleigh quotient `∫_{𝕋ⁿ}|f|² / (|D|⁻¹∫_D|f|²)`.
 *
 * # Safety
 * Handles must be live and `out` valid for writes.
 */
enum PdwStatus pdw_rayleigh_quotient(const struct PdwPoly *poly,
                                     const struct PdwDomain *domain,
                                     double *out);

/**
 * Hlawka's inequality for a positive definite `poly`. Returns
 * [`PdwStatus::PropertyViolation`] when it fails; `rayleigh` receives the
 * quotient either way.
 *
 * # Safety
 * Handles must be live and `rayleigh` valid for writes.
 */
enum PdwStatus pdw_hlawka_verify(const struct PdwPoly *poly,
                                 const struct PdwDomain *domain,
                                 double *rayleigh);

/**
 * Turán LP lower bound for `[-delta, delta]`. `freq_bound = 0` selects the
 * default. An uncertified witness is still written to `out` and reported as
 * [`PdwStatus::Uncertified`].
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum PdwStatus pdw_turan_lp_lower(double delta,
                                  size_t grid_size,
                                  size_t freq_bound,
                                  struct PdwTuranResult *out);

/**
 * Delsarte LP bound for the ball of radius `radius` in dimension `dim`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum PdwStatus pdw_delsarte_lp(size_t dim,
                               double radius,
                               size_t basis_size,
                               size_t grid_size,
                               struct PdwDelsarteResult *out);

/**
 * `θ(δ) = 1 − δ / a` from the Turán witness.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum PdwStatus pdw_theta(double delta, double *out);

/**
 * Two-sided bounds for `W_n(D)` with default solver settings; `q = 0`
 * picks the largest admissible lattice order.
 *
 * # Safety
 * `domain` must be a live handle and `out` valid for writes.
 */
enum PdwStatus pdw_wiener_bounds(const struct PdwDomain *domain,
                                 uint32_t q,
                                 struct PdwReport **out);

/**
 * # Safety
 * `report` must come from [`pdw_wiener_bounds`] and not be used afterwards.
 */
void pdw_report_free(struct PdwReport *report);

/**
 * Lower and upper values of a report.
 *
 * # Safety
 * `report` must be a live handle; `lower` and `upper` valid for writes.
 */
enum PdwStatus pdw_report_bounds(const struct PdwReport *report, double *lower, double *upper);

/**
 * The report as JSON; release the string with [`pdw_string_free`].
 *
 * # Safety
 * `report` must be a live handle and `out` valid for writes.
 */
enum PdwStatus pdw_report_json(const struct PdwReport *report, char **out);

/**
 * # Safety
 * `s` must come from a `pdw_*` function documented to return an owned
 * string, and not be used afterwards.
 */
void pdw_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PDW_H */
