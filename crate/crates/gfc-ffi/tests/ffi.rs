//! Exercises the C ABI in-process: handles, status codes, and the JSON
//! payloads other languages would parse.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use gfc_ffi::*;

fn take_string(ptr: *mut c_char) -> String {
    assert!(!ptr.is_null());
    let s = unsafe { CStr::from_ptr(ptr) }.to_str().unwrap().to_string();
    unsafe { gfc_string_free(ptr) };
    s
}

#[test]
fn slice_lifecycle_and_dimensions() {
    let mut handle: *mut GfcSlice = ptr::null_mut();
    // variant 1 = slots {3, 4, ...}, the degree-≥-2 algebra
    let status = unsafe { gfc_slice_build(1, 8, 0, &mut handle) };
    assert_eq!(status, GfcStatus::Ok);
    assert!(!handle.is_null());

    let mut dim = 0u64;
    for (degree, expected) in [(3u64, 4u64), (4, 5), (5, 1), (6, 0)] {
        assert_eq!(unsafe { gfc_slice_dim(handle, degree, &mut dim) }, GfcStatus::Ok);
        assert_eq!(dim, expected, "dim C^{degree}");
    }

    let mut chi = 1i64;
    assert_eq!(unsafe { gfc_slice_euler_characteristic(handle, &mut chi) }, GfcStatus::Ok);
    assert_eq!(chi, 0);

    let mut betti = 7u64;
    assert_eq!(unsafe { gfc_slice_betti(handle, 3, &mut betti) }, GfcStatus::Ok);
    assert_eq!(betti, 0, "the weight-8 complex is acyclic");

    let json = {
        let mut out: *mut c_char = ptr::null_mut();
        assert_eq!(unsafe { gfc_slice_to_json(handle, &mut out) }, GfcStatus::Ok);
        take_string(out)
    };
    let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(parsed["variant"], "ham0");
    assert_eq!(parsed["weight"], 8);

    unsafe { gfc_slice_free(handle) };
}

#[test]
fn exotic_class_line_through_the_abi() {
    let mut handle: *mut GfcSlice = ptr::null_mut();
    assert_eq!(unsafe { gfc_slice_build(0, 8, 0, &mut handle) }, GfcStatus::Ok);
    let mut betti = 0u64;
    assert_eq!(unsafe { gfc_slice_betti(handle, 7, &mut betti) }, GfcStatus::Ok);
    assert_eq!(betti, 1);
    unsafe { gfc_slice_free(handle) };
}

#[test]
fn invalid_arguments_are_rejected() {
    let mut handle: *mut GfcSlice = ptr::null_mut();
    assert_eq!(unsafe { gfc_slice_build(7, 8, 0, &mut handle) }, GfcStatus::InvalidArgument);
    assert_eq!(
        unsafe { gfc_slice_build(1, 8, 0, ptr::null_mut()) },
        GfcStatus::InvalidArgument
    );
    let mut dim = 0u64;
    assert_eq!(
        unsafe { gfc_slice_dim(ptr::null(), 0, &mut dim) },
        GfcStatus::InvalidArgument
    );
    // tiny budget trips the resource guard
    assert_eq!(unsafe { gfc_slice_build(1, 8, 2, &mut handle) }, GfcStatus::BudgetExceeded);
}

#[test]
fn euler_series_json_round_trips() {
    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { gfc_euler_series_json(1, 12, 0, &mut out) }, GfcStatus::Ok);
    let parsed: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(parsed["variable"], "t");
    assert_eq!(parsed["truncation"], 12);
    let coeffs = parsed["coefficients"].as_array().unwrap();
    assert!(coeffs.iter().any(|c| c["exp"] == 10 && c["value"] == "-1/1"));

    // the full series reaches down to t^-2
    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { gfc_euler_series_json(1, 8, 1, &mut out) }, GfcStatus::Ok);
    let parsed: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    let coeffs = parsed["coefficients"].as_array().unwrap();
    assert!(coeffs.iter().any(|c| c["exp"] == -2 && c["value"] == "1/1"));

    // the full series is built for n = 1 only
    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe { gfc_euler_series_json(2, 8, 1, &mut out) },
        GfcStatus::InvalidArgument
    );
}

#[test]
fn verify_suite_through_the_abi() {
    let suite = CString::new("genfun").unwrap();
    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { gfc_verify_json(suite.as_ptr(), &mut out) }, GfcStatus::Ok);
    let parsed: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    let reports = parsed.as_array().unwrap();
    assert!(!reports.is_empty());
    assert!(reports.iter().all(|r| r["pass"] == true));

    let bogus = CString::new("bogus").unwrap();
    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe { gfc_verify_json(bogus.as_ptr(), &mut out) },
        GfcStatus::InvalidArgument
    );
}

#[test]
fn string_free_accepts_null() {
    unsafe { gfc_string_free(ptr::null_mut()) };
    unsafe { gfc_slice_free(ptr::null_mut()) };
}
