/* C interface to the quartic-heat kernel toolkit. */

#ifndef QUARTIC_HEAT_H
#define QUARTIC_HEAT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every fallible call. `QH_OK` is zero; everything else
 * leaves the out-parameters untouched unless documented otherwise.
 */
typedef enum qh_status {
  QH_OK = 0,
  QH_NULL_POINTER = 1,
  QH_INVALID_INPUT = 2,
  QH_NON_ELLIPTIC = 3,
  QH_UNSUPPORTED = 4,
  QH_NO_CONVERGENCE = 5,
  QH_TOLERANCE_NOT_ACHIEVED = 6,
  QH_CANCELLATION_DOMINATED = 7,
} qh_status;

/**
 * Opaque coefficient handle. Create with [`qh_coefficients_new`], release
 * with [`qh_coefficients_free`].
 */
typedef struct qh_coefficients qh_coefficients;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Allocates a coefficient handle for alpha xi1^4 + 2 beta xi1^2 xi2^2 +
 * gamma xi2^4 after checking uniform ellipticity.
 *
 * # Safety
 * `out` must be a valid pointer. On `QH_OK` it receives an owned handle
 * that must be released with [`qh_coefficients_free`].
 */
enum qh_status qh_coefficients_new(double alpha,
                                   double beta,
                                   double gamma,
                                   struct qh_coefficients **out);

/**
 * Releases a handle from [`qh_coefficients_new`]. A null pointer is a
 * no-op.
 *
 * # Safety
 * `c` must be null or a pointer previously returned by
 * [`qh_coefficients_new`] that has not been freed yet.
 */
void qh_coefficients_free(struct qh_coefficients *c);

/**
 * Writes the normalized coupling Q, the sharp constant k, and the Gaussian
 * exponent constant sigma of the symbol.
 *
 * # Safety
 * `c` must be a live handle; each non-null out-pointer must be valid.
 */
enum qh_status qh_convexity(const struct qh_coefficients *c, double *q, double *k, double *sigma);

/**
 * Evaluates the quartic symbol A(xi).
 *
 * # Safety
 * `c` must be a live handle and `out` a valid pointer.
 */
enum qh_status qh_symbol(const struct qh_coefficients *c, double xi1, double xi2, double *out);

/**
 * Evaluates the dual norm p*(x) = max_eta x.eta / A(eta)^{1/4}.
 *
 * # Safety
 * `c` must be a live handle and `out` a valid pointer.
 */
enum qh_status qh_dual_norm(const struct qh_coefficients *c, double x1, double x2, double *out);

/**
 * Evaluates the kernel G(x, t) to the requested relative tolerance. The
 * integration contour moves onto the dominant critical points at early
 * times when one is known for this direction.
 *
 * On `QH_TOLERANCE_NOT_ACHIEVED` the best value and its error estimate are
 * still written, so the caller can decide whether they are usable.
 *
 * # Safety
 * `c` must be a live handle; `out_value` must be valid; `out_error` may be
 * null.
 */
enum qh_status qh_green_function(const struct qh_coefficients *c,
                                 double x1,
                                 double x2,
                                 double t,
                                 double tol,
                                 double *out_value,
                                 double *out_error);

/**
 * Evaluates F(lambda, x), the lambda-normalized oscillatory transform,
 * switching to the shifted contour where direct quadrature cancels.
 *
 * Same out-parameter contract as [`qh_green_function`].
 *
 * # Safety
 * `c` must be a live handle; `out_value` must be valid; `out_error` may be
 * null.
 */
enum qh_status qh_f_lambda(const struct qh_coefficients *c,
                           double x1,
                           double x2,
                           double lambda,
                           double tol,
                           double *out_value,
                           double *out_error);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUARTIC_HEAT_H */
