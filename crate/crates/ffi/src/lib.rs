//! C ABI over `modcalc`.
//!
//! Handles are opaque and owned by the caller once returned; free them with
//! the matching `*_free`. Strings returned through out-pointers are
//! NUL-terminated, heap-allocated and released with [`modcalc_string_free`].
//! Every fallible call returns a [`ModcalcStatus`]; on failure a message is
//! available from [`modcalc_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use modcalc::forms::{self, Form, TauTable};
use modcalc::lseries::{verify_identity, TauContext};
use modcalc::Error;

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModcalcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    WeightMismatch = 4,
    OutOfRange = 5,
    NotModular = 6,
    Utf8 = 7,
    Internal = 8,
}

/// A q-expansion with its weight.
pub struct ModcalcSeries {
    form: Form,
}

/// A table of Ramanujan tau values.
pub struct ModcalcTauTable {
    table: TauTable,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ModcalcStatus {
    match e {
        Error::Parse { .. } => ModcalcStatus::Parse,
        Error::WeightMismatch(..) => ModcalcStatus::WeightMismatch,
        Error::TauTableTooShort { .. } | Error::Precision { .. } => ModcalcStatus::OutOfRange,
        Error::NotModular { .. } | Error::Quasimodular(_) => ModcalcStatus::NotModular,
        _ => ModcalcStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (ModcalcStatus, String)>) -> ModcalcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ModcalcStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            ModcalcStatus::Internal
        }
    }
}

fn lift<T>(r: modcalc::Result<T>) -> Result<T, (ModcalcStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (ModcalcStatus, String) {
    (ModcalcStatus::NullPointer, format!("{what} is NULL"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (ModcalcStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (ModcalcStatus::Utf8, format!("{what} is not valid UTF-8")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (ModcalcStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = CString::new(s).expect("no interior NUL").into_raw();
    Ok(())
}

unsafe fn write_series(out: *mut *mut ModcalcSeries, form: Form) -> Result<(), (ModcalcStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(ModcalcSeries { form }));
    Ok(())
}

unsafe fn series_ref<'a>(s: *const ModcalcSeries) -> Result<&'a ModcalcSeries, (ModcalcStatus, String)> {
    s.as_ref().ok_or_else(|| null("series"))
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn modcalc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn modcalc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must come from this library (or be NULL) and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn modcalc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Evaluates an expression such as `"RC(E4,E6,1)"` to `prec` coefficients.
///
/// # Safety
/// `expr` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn modcalc_eval(expr: *const c_char, prec: usize, out: *mut *mut ModcalcSeries) -> ModcalcStatus {
    guard(|| {
        let text = read_str(expr, "expr")?;
        let form = lift(modcalc::cli::expr::eval_str(text, prec))?;
        write_series(out, form)
    })
}

/// `E_k` for even `k >= 4`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn modcalc_eisenstein(k: u32, prec: usize, out: *mut *mut ModcalcSeries) -> ModcalcStatus {
    guard(|| {
        let form = lift(forms::eisenstein(k, prec))?;
        write_series(out, form)
    })
}

/// The discriminant `Delta` (`prec >= 2`).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn modcalc_delta(prec: usize, out: *mut *mut ModcalcSeries) -> ModcalcStatus {
    guard(|| {
        let form = lift(forms::delta(prec))?;
        write_series(out, form)
    })
}

/// # Safety
/// `s` must come from this library (or be NULL) and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn modcalc_series_free(s: *mut ModcalcSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of known coefficients, 0 for NULL.
///
/// # Safety
/// `s` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn modcalc_series_prec(s: *const ModcalcSeries) -> usize {
    s.as_ref().map_or(0, |s| s.form.prec())
}

/// Weight, 0 for NULL.
///
/// # Safety
/// `s` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn modcalc_series_weight(s: *const ModcalcSeries) -> u32 {
    s.as_ref().map_or(0, |s| s.form.weight())
}

/// Whether the value is modular (as opposed to quasimodular).
///
/// # Safety
/// `s` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn modcalc_series_is_modular(s: *const ModcalcSeries) -> bool {
    s.as_ref().is_some_and(|s| s.form.is_modular())
}

/// Coefficient of `q^n` as an exact `"p/q"` string.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn modcalc_series_coeff(s: *const ModcalcSeries, n: usize, out: *mut *mut c_char) -> ModcalcStatus {
    guard(|| {
        let s = series_ref(s)?;
        let c = s.form.series().get(n).ok_or_else(|| {
            (
                ModcalcStatus::OutOfRange,
                format!("q^{n} is beyond precision {}", s.form.prec()),
            )
        })?;
        write_string(out, modcalc::arith::rat_to_string(c))
    })
}

/// `{"prec": .., "coeffs": ["p/q", ..]}`.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn modcalc_series_json(s: *const ModcalcSeries, out: *mut *mut c_char) -> ModcalcStatus {
    guard(|| {
        let s = series_ref(s)?;
        write_string(out, serde_json::to_string(s.form.series()).expect("serializable"))
    })
}

/// Exact coordinates in the `E4^a E6^b` basis as JSON.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn modcalc_series_basis_json(s: *const ModcalcSeries, out: *mut *mut c_char) -> ModcalcStatus {
    guard(|| {
        let s = series_ref(s)?;
        let coords = lift(forms::in_basis(&s.form))?;
        write_string(out, serde_json::to_string(&coords).expect("serializable"))
    })
}

/// Tau values for indices `< len`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn modcalc_tau_table_new(len: usize, out: *mut *mut ModcalcTauTable) -> ModcalcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = Box::into_raw(Box::new(ModcalcTauTable { table: TauTable::new(len) }));
        Ok(())
    })
}

/// # Safety
/// `t` must come from this library (or be NULL) and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn modcalc_tau_table_free(t: *mut ModcalcTauTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// # Safety
/// `t` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn modcalc_tau_table_len(t: *const ModcalcTauTable) -> usize {
    t.as_ref().map_or(0, |t| t.table.len())
}

/// `tau(n)` as a decimal string.
///
/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn modcalc_tau_table_get(t: *const ModcalcTauTable, n: usize, out: *mut *mut c_char) -> ModcalcStatus {
    guard(|| {
        let t = t.as_ref().ok_or_else(|| null("table"))?;
        let v = lift(t.table.tau(n))?;
        write_string(out, v.to_string())
    })
}

/// Checks one catalog identity (`"kumar"`, `"herrero"`, `"s10sig1"`,
/// `"s10sig3"`, `"s9sig1"`, `"s8sig1"`) at `m` with `cutoff` terms.
/// Builds its own tau table; prefer few large calls.
///
/// # Safety
/// `id` must be a NUL-terminated string; `rel_err` and `passed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn modcalc_verify_identity(
    id: *const c_char,
    m: usize,
    cutoff: usize,
    tol: f64,
    rel_err: *mut f64,
    passed: *mut bool,
) -> ModcalcStatus {
    guard(|| {
        let id = read_str(id, "id")?;
        if rel_err.is_null() || passed.is_null() {
            return Err(null("output pointer"));
        }
        let ident = lift(modcalc::poincare::find_identity(id))?;
        let ctx = TauContext::new(TauContext::required_len(m, cutoff));
        let rep = lift(verify_identity(&ctx, &ident, m, tol, cutoff))?;
        *rel_err = rep.rel_err_value;
        *passed = rep.verdict.passed();
        Ok(())
    })
}
