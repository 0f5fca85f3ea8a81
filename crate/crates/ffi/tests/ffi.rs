use std::ffi::{c_char, CStr, CString};
use std::ptr;

use modcalc_ffi::*;

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    modcalc_string_free(s);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(modcalc_last_error()).to_str().unwrap().to_owned()
}

#[test]
fn eval_and_inspect() {
    unsafe {
        let expr = CString::new("RC(E4,E6,1)").unwrap();
        let mut s = ptr::null_mut();
        assert_eq!(modcalc_eval(expr.as_ptr(), 8, &mut s), ModcalcStatus::Ok);
        assert_eq!(modcalc_series_weight(s), 12);
        assert_eq!(modcalc_series_prec(s), 8);
        assert!(modcalc_series_is_modular(s));

        let mut c = ptr::null_mut();
        assert_eq!(modcalc_series_coeff(s, 0, &mut c), ModcalcStatus::Ok);
        assert_eq!(take(c), "0");
        assert_eq!(modcalc_series_coeff(s, 1, &mut c), ModcalcStatus::Ok);
        let q1: i64 = take(c).parse().unwrap();
        assert_eq!(modcalc_series_coeff(s, 2, &mut c), ModcalcStatus::Ok);
        let q2: i64 = take(c).parse().unwrap();
        // a multiple of Delta: ratio q^2/q^1 is tau(2)
        assert_eq!(q2, -24 * q1);

        assert_eq!(modcalc_series_coeff(s, 8, &mut c), ModcalcStatus::OutOfRange);

        let mut j = ptr::null_mut();
        assert_eq!(modcalc_series_basis_json(s, &mut j), ModcalcStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(j)).unwrap();
        assert!(v.is_object() || v.is_array(), "{v}");
        modcalc_series_free(s);
    }
}

#[test]
fn constructors_and_json() {
    unsafe {
        let mut e4 = ptr::null_mut();
        assert_eq!(modcalc_eisenstein(4, 4, &mut e4), ModcalcStatus::Ok);
        let mut j = ptr::null_mut();
        assert_eq!(modcalc_series_json(e4, &mut j), ModcalcStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(j)).unwrap();
        assert_eq!(v["coeffs"], serde_json::json!(["1", "240", "2160", "6720"]));
        modcalc_series_free(e4);

        let mut d = ptr::null_mut();
        assert_eq!(modcalc_delta(3, &mut d), ModcalcStatus::Ok);
        let mut c = ptr::null_mut();
        modcalc_series_coeff(d, 2, &mut c);
        assert_eq!(take(c), "-24");
        modcalc_series_free(d);

        let mut bad = ptr::null_mut();
        assert_eq!(modcalc_eisenstein(5, 4, &mut bad), ModcalcStatus::InvalidArgument);
        assert!(bad.is_null());
    }
}

#[test]
fn error_codes_and_messages() {
    unsafe {
        let mut s = ptr::null_mut();
        let mismatch = CString::new("E4 + E6").unwrap();
        assert_eq!(modcalc_eval(mismatch.as_ptr(), 4, &mut s), ModcalcStatus::WeightMismatch);
        assert!(last_error().contains("4 vs 6"));

        let garbage = CString::new("E4 * Foo").unwrap();
        assert_eq!(modcalc_eval(garbage.as_ptr(), 4, &mut s), ModcalcStatus::Parse);
        assert!(last_error().contains("1:6"));

        assert_eq!(modcalc_eval(ptr::null(), 4, &mut s), ModcalcStatus::NullPointer);
        assert_eq!(modcalc_series_weight(ptr::null()), 0);

        let quasi = CString::new("E2").unwrap();
        assert_eq!(modcalc_eval(quasi.as_ptr(), 10, &mut s), ModcalcStatus::Ok);
        assert!(!modcalc_series_is_modular(s));
        let mut j = ptr::null_mut();
        assert_eq!(modcalc_series_basis_json(s, &mut j), ModcalcStatus::NotModular);
        modcalc_series_free(s);

        let bytes = b"E\xff\0";
        assert_eq!(modcalc_eval(bytes.as_ptr().cast(), 4, &mut s), ModcalcStatus::Utf8);
    }
}

#[test]
fn tau_table_handle() {
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(modcalc_tau_table_new(11, &mut t), ModcalcStatus::Ok);
        assert_eq!(modcalc_tau_table_len(t), 11);
        let mut v = ptr::null_mut();
        assert_eq!(modcalc_tau_table_get(t, 10, &mut v), ModcalcStatus::Ok);
        assert_eq!(take(v), "-115920");
        assert_eq!(modcalc_tau_table_get(t, 11, &mut v), ModcalcStatus::OutOfRange);
        modcalc_tau_table_free(t);
    }
}

#[test]
fn verify_identity_call() {
    unsafe {
        let id = CString::new("kumar").unwrap();
        let (mut err, mut ok) = (0.0, false);
        assert_eq!(modcalc_verify_identity(id.as_ptr(), 1, 10_000, 1e-10, &mut err, &mut ok), ModcalcStatus::Ok);
        assert!(ok && err < 1e-10, "{err}");
        let unknown = CString::new("nope").unwrap();
        assert_eq!(
            modcalc_verify_identity(unknown.as_ptr(), 1, 100, 1e-10, &mut err, &mut ok),
            ModcalcStatus::InvalidArgument
        );
    }
}

#[test]
fn version_and_header() {
    let v = unsafe { CStr::from_ptr(modcalc_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/modcalc.h")).unwrap();
    for sym in [
        "typedef struct ModcalcSeries ModcalcSeries",
        "MODCALC_STATUS_WEIGHT_MISMATCH",
        "modcalc_eval(",
        "modcalc_verify_identity(",
        "modcalc_string_free(",
    ] {
        assert!(header.contains(sym), "header lacks {sym}");
    }
}
