use std::ffi::{CStr, CString};
use std::ptr;

use hypmaass_ffi::*;

fn last_error() -> String {
    let p = hm_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn series_matches_library() {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { hm_series_new(6, 5, 1e-10, &mut h) }, HmStatus::Ok);
    let mut v = HmValue::default();
    assert_eq!(
        unsafe { hm_series_eval(h, HmTarget::Omega, 0.1, 1.2, &mut v) },
        HmStatus::Ok
    );
    let p = hypmaass::SeriesParams::new(6, 5, 1e-10).unwrap();
    let z = hypmaass::UpperHalfPoint::new(0.1, 1.2).unwrap();
    let want = hypmaass::series::hyperbolic_sums(&p, z, hypmaass::series::Target::Omega)
        .unwrap()
        .omega;
    assert_eq!((v.re, v.im), (want.re, want.im));
    assert!(v.error_bound <= 1e-10);
    unsafe { hm_series_free(h) };
}

#[test]
fn invalid_arguments_set_message() {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { hm_series_new(6, 7, 1e-10, &mut h) }, HmStatus::InvalidArgument);
    assert!(h.is_null());
    assert!(last_error().contains('7'));

    assert_eq!(unsafe { hm_series_new(6, 5, 1e-10, &mut h) }, HmStatus::Ok);
    assert!(hm_last_error_message().is_null());
    let mut v = HmValue::default();
    assert_eq!(
        unsafe { hm_series_eval(h, HmTarget::F, 0.0, -1.0, &mut v) },
        HmStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { hm_series_eval(ptr::null(), HmTarget::F, 0.0, 1.0, &mut v) },
        HmStatus::NullPointer
    );
    assert_eq!(
        unsafe { hm_series_eval(h, HmTarget::F, 0.0, 1.0, ptr::null_mut()) },
        HmStatus::NullPointer
    );
    unsafe { hm_series_free(h) };
    unsafe { hm_series_free(ptr::null_mut()) };
}

#[test]
fn kernel_skips_non_discriminants() {
    let mut h = ptr::null_mut();
    let s = unsafe { hm_kernel_new(HmKernelKind::Lambda, 6, 0.1, 1.2, 12, 0.5, 1e-8, &mut h) };
    assert_eq!(s, HmStatus::Ok);
    let mut c = HmValue::default();
    for d in [2, 3, 6, 7] {
        assert_eq!(unsafe { hm_kernel_coefficient(h, d, &mut c) }, HmStatus::Ok);
        assert_eq!((c.re, c.im), (0.0, 0.0));
    }
    assert_eq!(unsafe { hm_kernel_coefficient(h, 5, &mut c) }, HmStatus::Ok);
    assert!(c.re.hypot(c.im) > 0.0);
    let mut v = HmValue::default();
    assert_eq!(unsafe { hm_kernel_eval(h, 0.0, 1.0, &mut v) }, HmStatus::Ok);
    assert!(v.re.is_finite() && v.im.is_finite());
    unsafe { hm_kernel_free(h) };
}

#[test]
fn verify_returns_json() {
    let suite = CString::new("lemma22").unwrap();
    let mut json = ptr::null_mut();
    let mut passed = 0;
    assert_eq!(
        unsafe { hm_verify(suite.as_ptr(), 42, &mut json, &mut passed) },
        HmStatus::Ok
    );
    assert_eq!(passed, 1);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_string();
    assert!(text.contains("\"lemma22.iv\""));
    unsafe { hm_string_free(json) };

    let bad = CString::new("nope").unwrap();
    assert_eq!(
        unsafe { hm_verify(bad.as_ptr(), 42, &mut json, &mut passed) },
        HmStatus::InvalidArgument
    );
    assert!(last_error().contains("lemma22"));
}

#[test]
fn header_declares_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/hypmaass.h")).unwrap();
    for name in [
        "HYPMAASS_H",
        "hm_last_error_message",
        "hm_string_free",
        "hm_series_new",
        "hm_series_eval",
        "hm_series_free",
        "hm_kernel_new",
        "hm_kernel_coefficient",
        "hm_kernel_eval",
        "hm_kernel_free",
        "hm_verify",
        "typedef struct HmSeries HmSeries",
        "typedef struct HmKernel HmKernel",
        "HM_STATUS_OK = 0",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
