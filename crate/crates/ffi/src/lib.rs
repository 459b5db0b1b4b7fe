//! C ABI over `hypmaass`.
//!
//! Every fallible function returns an `HmStatus`. On failure the message is
//! available from `hm_last_error_message` on the same thread. Handles are
//! opaque and must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hypmaass::report::to_json;
use hypmaass::series::{hyperbolic_sums, Target};
use hypmaass::theta::{KernelCoefficients, KernelKind, SquarePolicy};
use hypmaass::verify::{run_suite, Suite, SuiteConfig};
use hypmaass::{Error, SeriesParams, UpperHalfPoint};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotConverged = 3,
    Numerical = 4,
    Panic = 5,
}

/// Which sum `hm_series_eval` returns.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HmTarget {
    F = 0,
    Omega = 1,
    Holomorphic = 2,
    FPrime = 3,
}

/// Which theta kernel `hm_kernel_new` builds.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HmKernelKind {
    Omega = 0,
    Lambda = 1,
}

/// A complex value with a bound on its truncation error.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HmValue {
    pub re: f64,
    pub im: f64,
    pub error_bound: f64,
}

/// Series parameters `(k, D, tol)`.
pub struct HmSeries {
    params: SeriesParams,
}

/// Precomputed theta kernel coefficients at a fixed `z`.
pub struct HmKernel {
    inner: KernelCoefficients,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> HmStatus {
    match e {
        Error::NotConverged { .. } | Error::TailAboveTolerance { .. } => HmStatus::NotConverged,
        Error::Pole(_) | Error::IllConditioned(_) | Error::RoughFunction { .. } | Error::Overflow(_) => {
            HmStatus::Numerical
        }
        _ => HmStatus::InvalidArgument,
    }
}

fn guard<F: FnOnce() -> Result<(), (HmStatus, String)>>(f: F) -> HmStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HmStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".to_string());
            HmStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (HmStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (HmStatus, String) {
    (HmStatus::NullPointer, format!("{what} is null"))
}

fn point(x: f64, y: f64) -> Result<UpperHalfPoint, (HmStatus, String)> {
    UpperHalfPoint::new(x, y).map_err(lib_err)
}

/// Message for the last failed call on this thread, or null.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn hm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn hm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates series parameters. `k` even and at least 4, `d` a non-square discriminant.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hm_series_new(k: u32, d: i64, tol: f64, out: *mut *mut HmSeries) -> HmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let params = SeriesParams::new(k as i64, d, tol).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(HmSeries { params }));
        Ok(())
    })
}

/// Releases a series handle. Null is ignored.
///
/// # Safety
/// `h` must come from `hm_series_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn hm_series_free(h: *mut HmSeries) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Evaluates one of the sums at `x + iy`.
///
/// # Safety
/// `h` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hm_series_eval(
    h: *const HmSeries,
    target: HmTarget,
    x: f64,
    y: f64,
    out: *mut HmValue,
) -> HmStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("handle"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let target = match target {
            HmTarget::F => Target::F,
            HmTarget::Omega => Target::Omega,
            HmTarget::Holomorphic => Target::Holomorphic,
            HmTarget::FPrime => Target::FPrime,
        };
        let v = hyperbolic_sums(&h.params, point(x, y)?, target)
            .map_err(lib_err)?
            .truncated(target);
        *out = HmValue {
            re: v.value.re,
            im: v.value.im,
            error_bound: v.tail_bound,
        };
        Ok(())
    })
}

/// Builds kernel coefficients for `D <= d_max` at `z = zx + i zy`, accurate
/// to `tol` for all `Im τ >= v_min`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hm_kernel_new(
    kind: HmKernelKind,
    k: u32,
    zx: f64,
    zy: f64,
    d_max: i64,
    v_min: f64,
    tol: f64,
    out: *mut *mut HmKernel,
) -> HmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let kind = match kind {
            HmKernelKind::Omega => KernelKind::Omega,
            HmKernelKind::Lambda => KernelKind::Lambda,
        };
        let inner = KernelCoefficients::build(kind, k, point(zx, zy)?, d_max, v_min, tol, SquarePolicy::Include)
            .map_err(lib_err)?;
        *out = Box::into_raw(Box::new(HmKernel { inner }));
        Ok(())
    })
}

/// Releases a kernel handle. Null is ignored.
///
/// # Safety
/// `h` must come from `hm_kernel_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn hm_kernel_free(h: *mut HmKernel) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// The coefficient of `e(Dτ)`. Zero for indices that are not discriminants.
///
/// # Safety
/// `h` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hm_kernel_coefficient(h: *const HmKernel, d: i64, out: *mut HmValue) -> HmStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("handle"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let c = h.inner.coefficient(d);
        *out = HmValue {
            re: c.re,
            im: c.im,
            error_bound: 0.0,
        };
        Ok(())
    })
}

/// The truncated kernel at `τ = u + iv`.
///
/// # Safety
/// `h` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hm_kernel_eval(h: *const HmKernel, u: f64, v: f64, out: *mut HmValue) -> HmStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("handle"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let r = h.inner.evaluate(point(u, v)?);
        *out = HmValue {
            re: r.value.re,
            im: r.value.im,
            error_bound: r.coefficient_error + r.last_term,
        };
        Ok(())
    })
}

/// Runs a verification suite and writes its JSON report to `*out_json`
/// (free with `hm_string_free`). `*out_passed` is 1 if every check passed.
///
/// # Safety
/// `suite` must be a NUL-terminated string; `out_json` and `out_passed` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hm_verify(
    suite: *const c_char,
    seed: u64,
    out_json: *mut *mut c_char,
    out_passed: *mut i32,
) -> HmStatus {
    guard(|| {
        if suite.is_null() {
            return Err(null("suite"));
        }
        if out_json.is_null() || out_passed.is_null() {
            return Err(null("out"));
        }
        let name = CStr::from_ptr(suite)
            .to_str()
            .map_err(|_| (HmStatus::InvalidArgument, "suite name is not UTF-8".to_string()))?;
        let suite: Suite = name.parse().map_err(|e: Error| lib_err(e))?;
        let reports = run_suite(suite, &SuiteConfig::new(seed)).map_err(lib_err)?;
        let json = CString::new(to_json(&reports)).map_err(|e| (HmStatus::Numerical, e.to_string()))?;
        *out_passed = reports.iter().all(|r| r.passed) as i32;
        *out_json = json.into_raw();
        Ok(())
    })
}
