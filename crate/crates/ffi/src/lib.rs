//! C ABI over the kernel toolkit. Handles are opaque, every call returns a
//! status code, and results come back through out-pointers.
//!
//! The generated header lands in `include/quartic_heat.h` at build time.

#![allow(non_camel_case_types)]

use quartic_heat::quadrature::{QuadratureSpec, f_lambda_auto, green_function};
use quartic_heat::saddle::contour_shift_for;
use quartic_heat::symbol::{convexity_data, eval_symbol_real};
use quartic_heat::{Coefficients, Error};

/// Opaque coefficient handle. Create with [`qh_coefficients_new`], release
/// with [`qh_coefficients_free`].
pub struct qh_coefficients(Coefficients);

/// Status code of every fallible call. `QH_OK` is zero; everything else
/// leaves the out-parameters untouched unless documented otherwise.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum qh_status {
    QH_OK = 0,
    QH_NULL_POINTER = 1,
    QH_INVALID_INPUT = 2,
    QH_NON_ELLIPTIC = 3,
    QH_UNSUPPORTED = 4,
    QH_NO_CONVERGENCE = 5,
    QH_TOLERANCE_NOT_ACHIEVED = 6,
    QH_CANCELLATION_DOMINATED = 7,
}

fn status_of(e: &Error) -> qh_status {
    match e {
        Error::NonElliptic { .. } => qh_status::QH_NON_ELLIPTIC,
        Error::Unsupported(_) => qh_status::QH_UNSUPPORTED,
        Error::InvalidInput(_) | Error::Csv(_) | Error::Io(_) => qh_status::QH_INVALID_INPUT,
        Error::NoConvergence { .. } => qh_status::QH_NO_CONVERGENCE,
        Error::ToleranceNotAchieved { .. } => qh_status::QH_TOLERANCE_NOT_ACHIEVED,
        Error::CancellationDominated { .. } => qh_status::QH_CANCELLATION_DOMINATED,
    }
}

unsafe fn coeffs<'a>(c: *const qh_coefficients) -> Option<&'a Coefficients> {
    unsafe { c.as_ref() }.map(|w| &w.0)
}

fn good_tol(tol: f64) -> bool {
    tol.is_finite() && tol > 0.0
}

/// Allocates a coefficient handle for alpha xi1^4 + 2 beta xi1^2 xi2^2 +
/// gamma xi2^4 after checking uniform ellipticity.
///
/// # Safety
/// `out` must be a valid pointer. On `QH_OK` it receives an owned handle
/// that must be released with [`qh_coefficients_free`].
#[unsafe(no_mangle)]
pub unsafe extern "C" fn qh_coefficients_new(
    alpha: f64,
    beta: f64,
    gamma: f64,
    out: *mut *mut qh_coefficients,
) -> qh_status {
    if out.is_null() {
        return qh_status::QH_NULL_POINTER;
    }
    match Coefficients::new(alpha, beta, gamma) {
        Ok(c) => {
            unsafe { out.write(Box::into_raw(Box::new(qh_coefficients(c)))) };
            qh_status::QH_OK
        }
        Err(e) => status_of(&e),
    }
}

/// Releases a handle from [`qh_coefficients_new`]. A null pointer is a
/// no-op.
///
/// # Safety
/// `c` must be null or a pointer previously returned by
/// [`qh_coefficients_new`] that has not been freed yet.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn qh_coefficients_free(c: *mut qh_coefficients) {
    if !c.is_null() {
        drop(unsafe { Box::from_raw(c) });
    }
}

/// Writes the normalized coupling Q, the sharp constant k, and the Gaussian
/// exponent constant sigma of the symbol.
///
/// # Safety
/// `c` must be a live handle; each non-null out-pointer must be valid.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn qh_convexity(
    c: *const qh_coefficients,
    q: *mut f64,
    k: *mut f64,
    sigma: *mut f64,
) -> qh_status {
    let Some(c) = (unsafe { coeffs(c) }) else {
        return qh_status::QH_NULL_POINTER;
    };
    let data = convexity_data(c);
    unsafe {
        if !q.is_null() {
            q.write(data.q);
        }
        if !k.is_null() {
            k.write(data.k);
        }
        if !sigma.is_null() {
            sigma.write(data.sigma);
        }
    }
    qh_status::QH_OK
}

/// Evaluates the quartic symbol A(xi).
///
/// # Safety
/// `c` must be a live handle and `out` a valid pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn qh_symbol(
    c: *const qh_coefficients,
    xi1: f64,
    xi2: f64,
    out: *mut f64,
) -> qh_status {
    let Some(c) = (unsafe { coeffs(c) }) else {
        return qh_status::QH_NULL_POINTER;
    };
    if out.is_null() {
        return qh_status::QH_NULL_POINTER;
    }
    unsafe { out.write(eval_symbol_real(c, [xi1, xi2])) };
    qh_status::QH_OK
}

/// Evaluates the dual norm p*(x) = max_eta x.eta / A(eta)^{1/4}.
///
/// # Safety
/// `c` must be a live handle and `out` a valid pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn qh_dual_norm(
    c: *const qh_coefficients,
    x1: f64,
    x2: f64,
    out: *mut f64,
) -> qh_status {
    let Some(c) = (unsafe { coeffs(c) }) else {
        return qh_status::QH_NULL_POINTER;
    };
    if out.is_null() {
        return qh_status::QH_NULL_POINTER;
    }
    match quartic_heat::finsler::dual_norm_p_star(c, [x1, x2]) {
        Ok(v) => {
            unsafe { out.write(v) };
            qh_status::QH_OK
        }
        Err(e) => status_of(&e),
    }
}

/// Evaluates the kernel G(x, t) to the requested relative tolerance. The
/// integration contour moves onto the dominant critical points at early
/// times when one is known for this direction.
///
/// On `QH_TOLERANCE_NOT_ACHIEVED` the best value and its error estimate are
/// still written, so the caller can decide whether they are usable.
///
/// # Safety
/// `c` must be a live handle; `out_value` must be valid; `out_error` may be
/// null.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn qh_green_function(
    c: *const qh_coefficients,
    x1: f64,
    x2: f64,
    t: f64,
    tol: f64,
    out_value: *mut f64,
    out_error: *mut f64,
) -> qh_status {
    let Some(c) = (unsafe { coeffs(c) }) else {
        return qh_status::QH_NULL_POINTER;
    };
    if out_value.is_null() {
        return qh_status::QH_NULL_POINTER;
    }
    if !good_tol(tol) || !(t > 0.0 && t.is_finite()) {
        return qh_status::QH_INVALID_INPUT;
    }
    let x = [x1, x2];
    let lambda_eff = (4.0 * t).powf(-1.0 / 3.0);
    let shifted = if lambda_eff > 8.0 {
        match contour_shift_for(c, x) {
            Ok(eta_unit) => {
                let eta = [lambda_eff * eta_unit[0], lambda_eff * eta_unit[1]];
                Some(QuadratureSpec::for_green_shifted(c, x, t, eta, tol))
            }
            Err(Error::Unsupported(_)) => None,
            Err(e) => return status_of(&e),
        }
    } else {
        None
    };
    let spec = shifted.unwrap_or_else(|| QuadratureSpec::for_green(c, x, t, tol));
    finishing(green_function(c, x, t, &spec), out_value, out_error)
}

/// Evaluates F(lambda, x), the lambda-normalized oscillatory transform,
/// switching to the shifted contour where direct quadrature cancels.
///
/// Same out-parameter contract as [`qh_green_function`].
///
/// # Safety
/// `c` must be a live handle; `out_value` must be valid; `out_error` may be
/// null.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn qh_f_lambda(
    c: *const qh_coefficients,
    x1: f64,
    x2: f64,
    lambda: f64,
    tol: f64,
    out_value: *mut f64,
    out_error: *mut f64,
) -> qh_status {
    let Some(c) = (unsafe { coeffs(c) }) else {
        return qh_status::QH_NULL_POINTER;
    };
    if out_value.is_null() {
        return qh_status::QH_NULL_POINTER;
    }
    if !good_tol(tol) {
        return qh_status::QH_INVALID_INPUT;
    }
    finishing(
        f_lambda_auto(c, [x1, x2], lambda, tol),
        out_value,
        out_error,
    )
}

fn finishing(
    r: quartic_heat::Result<quartic_heat::KernelValue>,
    out_value: *mut f64,
    out_error: *mut f64,
) -> qh_status {
    let write = |kv: &quartic_heat::KernelValue| unsafe {
        out_value.write(kv.value);
        if !out_error.is_null() {
            out_error.write(kv.estimated_error);
        }
    };
    match r {
        Ok(kv) => {
            write(&kv);
            qh_status::QH_OK
        }
        Err(Error::ToleranceNotAchieved { best, .. }) => {
            write(&best);
            qh_status::QH_TOLERANCE_NOT_ACHIEVED
        }
        Err(e) => status_of(&e),
    }
}
