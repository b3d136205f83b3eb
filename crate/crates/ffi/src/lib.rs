//! C ABI over `merostar`.
//!
//! Series and sampling grids cross the boundary as opaque handles that the
//! caller frees with the matching `*_free` function. Every fallible call
//! returns an [`MsStatus`]; on a non-`Ok` status a description is available
//! from [`ms_last_error_message`] on the same thread. Strings returned
//! through `char **` out-parameters are owned by the caller and released
//! with [`ms_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};
use std::ptr;
use std::slice;

use merostar::classes::{check_class, coeff_bound, coeff_sufficient_me, ClassSpec};
use merostar::{
    run_suite, Complex64, DiscGrid, Error, Family, LaurentFunction, MembershipVerdict, Status,
    Suite, SuiteParams,
};

/// Opaque truncated Laurent series.
pub struct MsSeries(LaurentFunction);

/// Opaque polar sampling grid.
pub struct MsGrid(DiscGrid);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NonFinite = 3,
    Parse = 4,
    Io = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MsClass {
    Me = 0,
    Mf = 1,
    Starlike = 2,
    Tme = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MsMembership {
    CertifiedMember = 0,
    SampledMember = 1,
    NonMember = 2,
    Indeterminate = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MsVerdict {
    pub status: MsMembership,
    pub min_margin: f64,
    /// Nonzero when `witness_re`/`witness_im` hold the minimizing point.
    pub has_witness: i32,
    pub witness_re: f64,
    pub witness_im: f64,
    pub samples_checked: usize,
    pub degenerate: usize,
}

impl From<&MembershipVerdict> for MsVerdict {
    fn from(v: &MembershipVerdict) -> Self {
        let status = match v.status {
            Status::CertifiedMember => MsMembership::CertifiedMember,
            Status::SampledMember => MsMembership::SampledMember,
            Status::NonMember => MsMembership::NonMember,
            Status::Indeterminate => MsMembership::Indeterminate,
        };
        let w = v.witness.unwrap_or_default();
        MsVerdict {
            status,
            min_margin: v.min_margin,
            has_witness: v.witness.is_some() as i32,
            witness_re: w.re,
            witness_im: w.im,
            samples_checked: v.samples_checked,
            degenerate: v.degenerate,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> MsStatus {
    match err {
        Error::NonFinite { .. } => MsStatus::NonFinite,
        Error::Schema(_) => MsStatus::Parse,
        Error::Io { .. } => MsStatus::Io,
        _ => MsStatus::InvalidArgument,
    }
}

fn fail(status: MsStatus, message: impl Into<String>) -> MsStatus {
    set_error(message.into());
    status
}

/// Runs `body`, mapping errors and panics to status codes.
fn guard<F>(body: F) -> MsStatus
where
    F: FnOnce() -> Result<(), MsStatus> + UnwindSafe,
{
    match catch_unwind(body) {
        Ok(Ok(())) => MsStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(MsStatus::Panic, format!("internal panic: {msg}"))
        }
    }
}

fn lift<T>(r: merostar::Result<T>) -> Result<T, MsStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, MsStatus> {
    // SAFETY: caller guarantees `p` is null or valid for the call's duration.
    unsafe { p.as_ref() }.ok_or_else(|| fail(MsStatus::NullPointer, format!("{what} is null")))
}

fn out_ptr<T>(p: *mut T, what: &str) -> Result<*mut T, MsStatus> {
    if p.is_null() {
        Err(fail(MsStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(p)
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, MsStatus> {
    if p.is_null() {
        return Err(fail(MsStatus::NullPointer, format!("{what} is null")));
    }
    // SAFETY: caller passes a NUL-terminated string.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| fail(MsStatus::Parse, format!("{what} is not valid UTF-8")))
}

fn give_string(text: String, out: *mut *mut c_char) -> Result<(), MsStatus> {
    let c = CString::new(text).map_err(|_| fail(MsStatus::Parse, "output contains NUL"))?;
    // SAFETY: `out` was checked non-null by the caller of this helper.
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Message for the last failing call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ms_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ms_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn ms_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: produced by `CString::into_raw` in `give_string`.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Builds `1/z + sum_n (re[n] + i im[n]) z^n` for `n < len`. `im` may be
/// null for real coefficients; both may be null when `len == 0`.
///
/// # Safety
/// `re` and `im` (when non-null) must point to `len` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn ms_series_new(
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut MsSeries,
) -> MsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        if len > 0 && re.is_null() {
            return Err(fail(MsStatus::NullPointer, "re is null"));
        }
        let re = if len == 0 {
            &[][..]
        } else {
            unsafe { slice::from_raw_parts(re, len) }
        };
        let im = if im.is_null() || len == 0 {
            None
        } else {
            Some(unsafe { slice::from_raw_parts(im, len) })
        };
        let coeffs = (0..len)
            .map(|n| Complex64::new(re[n], im.map_or(0.0, |v| v[n])))
            .collect();
        let f = lift(LaurentFunction::from_coeffs(coeffs))?;
        unsafe { *out = Box::into_raw(Box::new(MsSeries(f))) };
        Ok(())
    })
}

/// Parses a `{"coeffs": [[re, im], ...]}` document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_series_from_json(
    json: *const c_char,
    out: *mut *mut MsSeries,
) -> MsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let text = unsafe { read_str(json, "json") }?;
        let value = serde_json::from_str(text).map_err(|e| fail(MsStatus::Parse, e.to_string()))?;
        let f = lift(LaurentFunction::from_json(&value))?;
        unsafe { *out = Box::into_raw(Box::new(MsSeries(f))) };
        Ok(())
    })
}

/// Serializes a series; free the result with [`ms_string_free`].
///
/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_series_to_json(
    series: *const MsSeries,
    out: *mut *mut c_char,
) -> MsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let f = unsafe { deref(series, "series") }?;
        give_string(f.0.to_json().to_string(), out)
    })
}

/// Number of stored tail coefficients; 0 for null.
///
/// # Safety
/// `series` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ms_series_len(series: *const MsSeries) -> usize {
    unsafe { series.as_ref() }.map_or(0, |f| f.0.len())
}

/// # Safety
/// `series` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ms_series_free(series: *mut MsSeries) {
    if !series.is_null() {
        drop(unsafe { Box::from_raw(series) });
    }
}

/// Evaluates `g(z) = z f(z)`.
///
/// # Safety
/// `series` must be a live handle; `out_re` and `out_im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_series_eval_g(
    series: *const MsSeries,
    re: f64,
    im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> MsStatus {
    guard(|| {
        let f = unsafe { deref(series, "series") }?;
        let (out_re, out_im) = (out_ptr(out_re, "out_re")?, out_ptr(out_im, "out_im")?);
        let g = f.0.eval_g(Complex64::new(re, im));
        unsafe {
            *out_re = g.re;
            *out_im = g.im;
        }
        Ok(())
    })
}

/// Default grid: twelve radii up to 0.9999, 2048 angles each.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_grid_default(out: *mut *mut MsGrid) -> MsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        unsafe { *out = Box::into_raw(Box::new(MsGrid(DiscGrid::default()))) };
        Ok(())
    })
}

/// Grid over strictly increasing `radii` in `(0, 1)`.
///
/// # Safety
/// `radii` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_grid_new(
    radii: *const f64,
    len: usize,
    angular_samples: usize,
    out: *mut *mut MsGrid,
) -> MsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        if radii.is_null() {
            return Err(fail(MsStatus::NullPointer, "radii is null"));
        }
        let radii = unsafe { slice::from_raw_parts(radii, len) }.to_vec();
        let grid = lift(DiscGrid::new(radii, angular_samples))?;
        unsafe { *out = Box::into_raw(Box::new(MsGrid(grid))) };
        Ok(())
    })
}

/// # Safety
/// `grid` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ms_grid_free(grid: *mut MsGrid) {
    if !grid.is_null() {
        drop(unsafe { Box::from_raw(grid) });
    }
}

/// Sampled membership check. `Tme` is scanned with the ME functional.
///
/// # Safety
/// `series` and `grid` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_check(
    series: *const MsSeries,
    class: MsClass,
    alpha: f64,
    grid: *const MsGrid,
    out: *mut MsVerdict,
) -> MsStatus {
    guard(|| {
        let f = unsafe { deref(series, "series") }?;
        let grid = unsafe { deref(grid, "grid") }?;
        let out = out_ptr(out, "out")?;
        let family = match class {
            MsClass::Me => Family::Me,
            MsClass::Mf => Family::Mf,
            MsClass::Starlike => Family::Starlike,
            MsClass::Tme => Family::Tme,
        };
        let spec = lift(ClassSpec::new(family, alpha))?;
        let v = lift(check_class(&f.0, spec, &grid.0))?;
        unsafe { *out = MsVerdict::from(&v) };
        Ok(())
    })
}

/// Sharp bound on `|a_n|` over ME(alpha).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_coeff_bound(alpha: f64, n: usize, out: *mut f64) -> MsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(fail(
                MsStatus::InvalidArgument,
                format!("alpha must be >= 0, got {alpha}"),
            ));
        }
        unsafe { *out = coeff_bound(alpha, n) };
        Ok(())
    })
}

/// Coefficient-sum sufficient condition for ME(alpha). Writes 1 or 0 to
/// `holds` and `1 - sum` to `margin`.
///
/// # Safety
/// `series` must be a live handle; `holds` and `margin` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_coeff_sufficient_me(
    series: *const MsSeries,
    alpha: f64,
    holds: *mut i32,
    margin: *mut f64,
) -> MsStatus {
    guard(|| {
        let f = unsafe { deref(series, "series") }?;
        let (holds, margin) = (out_ptr(holds, "holds")?, out_ptr(margin, "margin")?);
        let c = lift(coeff_sufficient_me(&f.0, alpha))?;
        unsafe {
            *holds = c.holds as i32;
            *margin = c.margin;
        }
        Ok(())
    })
}

/// Runs a named suite with default parameters and writes its JSON report.
/// `grid` may be null for the default grid. `passed` (optional) receives 1
/// when no check failed.
///
/// # Safety
/// `name` must be a NUL-terminated string, `grid` null or a live handle,
/// `out_json` writable, `passed` null or writable.
#[no_mangle]
pub unsafe extern "C" fn ms_run_suite(
    name: *const c_char,
    seed: u64,
    grid: *const MsGrid,
    out_json: *mut *mut c_char,
    passed: *mut i32,
) -> MsStatus {
    guard(|| {
        let out_json = out_ptr(out_json, "out_json")?;
        let suite: Suite = lift(unsafe { read_str(name, "name") }?.parse())?;
        let grid = unsafe { grid.as_ref() }.map_or_else(DiscGrid::default, |g| g.0.clone());
        let params = SuiteParams {
            seed,
            grid,
            ..SuiteParams::default()
        };
        let report = lift(run_suite(suite, &params))?;
        if let Some(p) = unsafe { passed.as_mut() } {
            *p = report.passed() as i32;
        }
        give_string(report.to_json_string(), out_json)
    })
}
