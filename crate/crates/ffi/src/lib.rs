//! C ABI over `gmr-core`.
//!
//! Every function returns a status code (`GMR_OK` on success) and writes
//! results through out-pointers. On failure the message is available from
//! [`gmr_last_error`] on the same thread until the next call. Solution
//! families are opaque handles created from JSON and released with
//! [`gmr_family_free`]; strings returned by the library are released with
//! [`gmr_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gmr_core::lie::{classify, AlgebraElement};
use gmr_core::solutions::SolutionFamily;
use gmr_core::specfun::airy;
use gmr_core::transform::{apply_point, PointMap};
use gmr_core::{pde_operator, Derivs, Error, ModelParams, PdePoint};

pub const GMR_OK: i32 = 0;
pub const GMR_ERR_NULL: i32 = 1;
pub const GMR_ERR_DOMAIN: i32 = 2;
pub const GMR_ERR_IO: i32 = 3;
pub const GMR_ERR_INVALID: i32 = 4;
pub const GMR_ERR_NON_FINITE: i32 = 5;
pub const GMR_ERR_NUMERICAL: i32 = 6;
pub const GMR_ERR_UTF8: i32 = 7;
pub const GMR_ERR_PANIC: i32 = 8;

/// Opaque solution family handle.
pub struct GmrFamily(SolutionFamily);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GmrDerivs {
    pub u: f64,
    pub u_t: f64,
    pub u_x: f64,
    pub u_xx: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GmrAiry {
    pub ai: f64,
    pub aip: f64,
    pub bi: f64,
    pub bip: f64,
    pub est_error: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GmrPoint {
    pub t: f64,
    pub x: f64,
    pub u: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn code_of(e: &Error) -> i32 {
    match e {
        Error::Domain(_)
        | Error::Pole(_)
        | Error::OutOfWindow { .. }
        | Error::SigmaMismatch(..)
        | Error::ZeroElement
        | Error::ProjectiveSingularity(_)
        | Error::Divergence(_) => GMR_ERR_DOMAIN,
        Error::NonFinite(_) => GMR_ERR_NON_FINITE,
        Error::Numerical(_) => GMR_ERR_NUMERICAL,
        Error::Io(_) => GMR_ERR_IO,
        Error::Invalid(_) | Error::Json(_) => GMR_ERR_INVALID,
    }
}

enum Fail {
    Lib(Error),
    Null(&'static str),
    Utf8,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

/// Run `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> i32 {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GMR_OK,
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            code_of(&e)
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            GMR_ERR_NULL
        }
        Ok(Err(Fail::Utf8)) => {
            set_error("string is not valid UTF-8".into());
            GMR_ERR_UTF8
        }
        Err(_) => {
            set_error("internal panic".into());
            GMR_ERR_PANIC
        }
    }
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Utf8)
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn gmr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Create a family from JSON such as
/// `{"family":"Inv1","c1":1,"c2":0,"params":{"k":1,"alpha":0,"sigma":1,"lambda":0.5}}`.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gmr_family_from_json(json: *const c_char, out: *mut *mut GmrFamily) -> i32 {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let f = SolutionFamily::from_json(str_arg(json, "json")?)?;
        *out = Box::into_raw(Box::new(GmrFamily(f)));
        Ok(())
    })
}

/// # Safety
/// `f` must come from [`gmr_family_from_json`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gmr_family_free(f: *mut GmrFamily) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gmr_family_eval(f: *const GmrFamily, t: f64, x: f64, out: *mut f64) -> i32 {
    guard(|| {
        let f = f.as_ref().ok_or(Fail::Null("family"))?;
        *out_ref(out, "out")? = f.0.eval(t, x)?;
        Ok(())
    })
}

/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gmr_family_eval_derivs(
    f: *const GmrFamily,
    t: f64,
    x: f64,
    out: *mut GmrDerivs,
) -> i32 {
    guard(|| {
        let f = f.as_ref().ok_or(Fail::Null("family"))?;
        let d = f.0.eval_derivs(t, x)?;
        *out_ref(out, "out")? = GmrDerivs {
            u: d.u,
            u_t: d.u_t,
            u_x: d.u_x,
            u_xx: d.u_xx,
        };
        Ok(())
    })
}

/// `½σ²x²u_xx + kx(α−x)u_x + λx²u − u_t`.
///
/// # Safety
/// `d` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gmr_pde_operator(
    k: f64,
    alpha: f64,
    sigma: f64,
    lambda: f64,
    d: *const GmrDerivs,
    x: f64,
    out: *mut f64,
) -> i32 {
    guard(|| {
        let p = ModelParams::new(k, alpha, sigma, lambda)?;
        let d = d.as_ref().ok_or(Fail::Null("derivs"))?;
        let d = Derivs {
            u: d.u,
            u_t: d.u_t,
            u_x: d.u_x,
            u_xx: d.u_xx,
        };
        *out_ref(out, "out")? = pde_operator(&p, &d, x)?;
        Ok(())
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gmr_airy(x: f64, out: *mut GmrAiry) -> i32 {
    guard(|| {
        let a = airy(x)?;
        *out_ref(out, "out")? = GmrAiry {
            ai: a.ai,
            aip: a.aip,
            bi: a.bi,
            bip: a.bip,
            est_error: a.est_error,
        };
        Ok(())
    })
}

/// Image of `p` under `G_g(ε)` in the symmetric case `α = 0`, `λ = k²/(2σ²)`.
///
/// # Safety
/// `p` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gmr_apply_point(
    k: f64,
    sigma: f64,
    g: u8,
    eps: f64,
    p: *const GmrPoint,
    out: *mut GmrPoint,
) -> i32 {
    guard(|| {
        let params = ModelParams::symmetric(k, sigma)?;
        let p = p.as_ref().ok_or(Fail::Null("point"))?;
        let m = PointMap::new(g, eps)?;
        let r = apply_point(&params, &m, &PdePoint::new(p.t, p.x, p.u)?)?;
        *out_ref(out, "out")? = GmrPoint {
            t: r.t,
            x: r.x,
            u: r.u,
        };
        Ok(())
    })
}

/// Classify `Σ coeffs[i]·V_{i+1}`; writes an owned JSON string to `out`.
///
/// # Safety
/// `coeffs` must point to six doubles and `out` be a valid pointer. Release
/// the string with [`gmr_string_free`].
#[no_mangle]
pub unsafe extern "C" fn gmr_classify_json(coeffs: *const f64, sigma: f64, out: *mut *mut c_char) -> i32 {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        if coeffs.is_null() {
            return Err(Fail::Null("coeffs"));
        }
        let mut a = [0.0; 6];
        a.copy_from_slice(std::slice::from_raw_parts(coeffs, 6));
        let x = AlgebraElement::new(a, sigma)?;
        let rep = classify(&x)?;
        let s = serde_json::to_string(&rep).map_err(Error::from)?;
        *out = CString::new(s).expect("JSON has no nul").into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gmr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_codes_are_distinct() {
        let codes = [
            GMR_OK,
            GMR_ERR_NULL,
            GMR_ERR_DOMAIN,
            GMR_ERR_IO,
            GMR_ERR_INVALID,
            GMR_ERR_NON_FINITE,
            GMR_ERR_NUMERICAL,
            GMR_ERR_UTF8,
            GMR_ERR_PANIC,
        ];
        let mut s = codes.to_vec();
        s.sort();
        s.dedup();
        assert_eq!(s.len(), codes.len());
    }

    #[test]
    fn last_error_cleared_on_success() {
        let mut v = GmrAiry::default();
        assert_eq!(unsafe { gmr_airy(100.0, &mut v) }, GMR_ERR_DOMAIN);
        assert!(!gmr_last_error().is_null());
        assert_eq!(unsafe { gmr_airy(0.0, &mut v) }, GMR_OK);
        assert!(gmr_last_error().is_null());
    }
}
