//! C ABI over `crinv`.
//!
//! Polynomials cross the boundary as opaque `CrinvPolynomial` handles. Every
//! fallible function returns a `CrinvStatus`; on failure the message is
//! available from `crinv_last_error_message` on the same thread. Strings
//! returned through out-parameters are owned by the caller and released with
//! `crinv_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use crinv::convexity::{convexifiability_verdict, gamma, model_convexity, GammaBranch, KNModel, KNOptions};
use crinv::multitype::{infer_multitype, MultitypeOptions};
use crinv::planar::analyze;
use crinv::poly::{parse_defining_equation, Polynomial};
use crinv::Error;
use num_bigint::BigInt;
use num_rational::BigRational;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrinvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    PreconditionFailed = 4,
    DomainError = 5,
    NonConvergence = 6,
    InvalidJson = 7,
    IoError = 8,
    Panic = 9,
}

/// Opaque polynomial handle.
pub struct CrinvPolynomial {
    inner: Polynomial,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> CrinvStatus {
    set_error(&format!("error[{}]: {e}", e.code()));
    match e {
        Error::Parse { .. } => CrinvStatus::ParseError,
        Error::Precondition { .. } => CrinvStatus::PreconditionFailed,
        Error::Domain(_) => CrinvStatus::DomainError,
        Error::NonConvergence(_) => CrinvStatus::NonConvergence,
        Error::Json(_) => CrinvStatus::InvalidJson,
        Error::Io(_) => CrinvStatus::IoError,
    }
}

fn guard(f: impl FnOnce() -> CrinvStatus) -> CrinvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            CrinvStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, CrinvStatus> {
    if s.is_null() {
        set_error("null string argument");
        return Err(CrinvStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        CrinvStatus::InvalidUtf8
    })
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> CrinvStatus {
    if out.is_null() {
        set_error("null output pointer");
        return CrinvStatus::NullPointer;
    }
    *out = CString::new(s).unwrap_or_default().into_raw();
    CrinvStatus::Ok
}

unsafe fn poly_ref<'a>(p: *const CrinvPolynomial) -> Result<&'a Polynomial, CrinvStatus> {
    if p.is_null() {
        set_error("null polynomial handle");
        return Err(CrinvStatus::NullPointer);
    }
    Ok(&(*p).inner)
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String, CrinvStatus> {
    serde_json::to_string(v).map_err(|e| status_of(&Error::Json(e.to_string())))
}

unsafe fn store_poly(out: *mut *mut CrinvPolynomial, p: Polynomial) -> CrinvStatus {
    if out.is_null() {
        set_error("null output pointer");
        return CrinvStatus::NullPointer;
    }
    *out = Box::into_raw(Box::new(CrinvPolynomial { inner: p }));
    CrinvStatus::Ok
}

/// Parses a defining equation in `n` complex variables.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn crinv_polynomial_parse(
    text: *const c_char,
    n: usize,
    out: *mut *mut CrinvPolynomial,
) -> CrinvStatus {
    guard(|| {
        let s = try_status!(read_str(text));
        match parse_defining_equation(s, n) {
            Ok(p) => store_poly(out, p),
            Err(e) => status_of(&e),
        }
    })
}

/// Builds a polynomial from its JSON serialization.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn crinv_polynomial_from_json(
    json: *const c_char,
    out: *mut *mut CrinvPolynomial,
) -> CrinvStatus {
    guard(|| {
        let s = try_status!(read_str(json));
        match Polynomial::from_json(s) {
            Ok(p) => store_poly(out, p),
            Err(e) => status_of(&e),
        }
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `p` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn crinv_polynomial_free(p: *mut CrinvPolynomial) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// JSON serialization with exact `p/q` coefficients.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn crinv_polynomial_to_json(p: *const CrinvPolynomial, out: *mut *mut c_char) -> CrinvStatus {
    guard(|| {
        let p = try_status!(poly_ref(p));
        write_string(out, p.to_json())
    })
}

/// Writes 1 when the polynomial is real valued, 0 otherwise.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn crinv_polynomial_is_real_valued(p: *const CrinvPolynomial, out: *mut i32) -> CrinvStatus {
    guard(|| {
        let p = try_status!(poly_ref(p));
        if out.is_null() {
            set_error("null output pointer");
            return CrinvStatus::NullPointer;
        }
        *out = i32::from(p.is_real_valued());
        CrinvStatus::Ok
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn crinv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Convexity threshold γ for even `l` with `2 ≤ l ≤ k`. `out_branch` receives
/// 0 for the rational branch and 1 for the radical branch.
///
/// # Safety
/// Output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn crinv_gamma(l: u32, k: u32, out_value: *mut f64, out_branch: *mut i32) -> CrinvStatus {
    guard(|| {
        if out_value.is_null() || out_branch.is_null() {
            set_error("null output pointer");
            return CrinvStatus::NullPointer;
        }
        match gamma(l, k) {
            Ok(g) => {
                *out_value = g.value;
                *out_branch = match g.branch {
                    GammaBranch::Rational => 0,
                    GammaBranch::Radical => 1,
                };
                CrinvStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Convexity of `|z|^k + a|z|^(k−l) Re z^l` with `a = a_num / a_den`.
/// `out_convexifiable` receives 1, 0, or −1 when undetermined (`l` divides `k`).
///
/// # Safety
/// Output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn crinv_model_convexity(
    k: u32,
    l: u32,
    a_num: i64,
    a_den: i64,
    out_convex: *mut i32,
    out_convexifiable: *mut i32,
) -> CrinvStatus {
    guard(|| {
        if out_convex.is_null() || out_convexifiable.is_null() {
            set_error("null output pointer");
            return CrinvStatus::NullPointer;
        }
        if a_den == 0 {
            return status_of(&Error::Domain("denominator of a is zero".into()));
        }
        let a = BigRational::new(BigInt::from(a_num), BigInt::from(a_den));
        match KNModel::new(k, l, a).and_then(|m| model_convexity(&m)) {
            Ok(r) => {
                *out_convex = i32::from(r.convex);
                *out_convexifiable = r.convexifiable.map_or(-1, i32::from);
                CrinvStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Planar report as JSON (n = 1 hypersurfaces).
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn crinv_classify_json(p: *const CrinvPolynomial, out: *mut *mut c_char) -> CrinvStatus {
    guard(|| {
        let p = try_status!(poly_ref(p));
        match analyze(p) {
            Ok(r) => write_string(out, try_status!(to_json(&r))),
            Err(e) => status_of(&e),
        }
    })
}

/// Multitype result as JSON.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn crinv_multitype_json(
    p: *const CrinvPolynomial,
    permute: bool,
    max_denominator: u64,
    out: *mut *mut c_char,
) -> CrinvStatus {
    guard(|| {
        let p = try_status!(poly_ref(p));
        let opts = MultitypeOptions {
            permute,
            max_denominator,
        };
        match infer_multitype(p, &opts) {
            Ok(r) => write_string(out, try_status!(to_json(&r))),
            Err(e) => status_of(&e),
        }
    })
}

/// Kohn-Nirenberg report for a homogeneous polynomial of degree `m`.
/// `grid = 0` selects the default grid.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn crinv_kn_report_json(
    p: *const CrinvPolynomial,
    m: u32,
    grid: usize,
    refinements: usize,
    tol: f64,
    out: *mut *mut c_char,
) -> CrinvStatus {
    guard(|| {
        let p = try_status!(poly_ref(p));
        if !(tol > 0.0) {
            return status_of(&Error::Domain("tol must be positive".into()));
        }
        let opts = KNOptions {
            grid: (grid > 0).then_some(grid),
            refinements,
            tol,
            ..KNOptions::default()
        };
        match convexifiability_verdict(p, m, &opts) {
            Ok(r) => write_string(out, try_status!(to_json(&r))),
            Err(e) => status_of(&e),
        }
    })
}

/// Message of the last failure on this thread; valid until the next call into the library.
#[no_mangle]
pub extern "C" fn crinv_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, statically allocated.
#[no_mangle]
pub extern "C" fn crinv_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}
