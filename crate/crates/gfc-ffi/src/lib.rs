//! C ABI for the engine: opaque slice handles, status codes, and
//! JSON-rendering entry points so other languages can bind without
//! understanding the Rust types.
//!
//! Conventions: every function returns a `GfcStatus`; results come back
//! through out-pointers. Strings are NUL-terminated, allocated by this
//! library, and must be released with `gfc_string_free`. Slice handles
//! must be released with `gfc_slice_free`. Handles are immutable after
//! construction and safe to share across threads for reads.

use std::collections::BTreeMap;
use std::ffi::{c_char, c_int, CStr, CString};
use std::ptr;

use gfc::characteristic::factorize;
use gfc::complex::{build_slice, BuildOptions, Variant, WeightSlice};
use gfc::genfun::{complex_euler_series, perchik_full_series, perchik_series};
use gfc::verify::run_suite;
use gfc::GfcError;

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GfcStatus {
    Ok = 0,
    InvalidArgument = 1,
    BudgetExceeded = 2,
    VerificationFailed = 3,
    Internal = 4,
}

/// Opaque handle to a built weight slice.
pub struct GfcSlice {
    slice: WeightSlice,
}

fn status_of(err: &GfcError) -> GfcStatus {
    match err {
        GfcError::BudgetExceeded { .. } => GfcStatus::BudgetExceeded,
        GfcError::Unsupported(_) | GfcError::DimensionMismatch(_) | GfcError::DegreeUnderflow { .. } => {
            GfcStatus::InvalidArgument
        }
        GfcError::Inconsistency(_) => GfcStatus::Internal,
    }
}

fn variant_of(code: c_int) -> Option<Variant> {
    match code {
        0 => Some(Variant::Ham),
        1 => Some(Variant::Ham0),
        _ => None,
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Builds the weight slice of one algebra variant.
///
/// `variant`: 0 for the degree-≥-1 algebra (slots 1, 3, 4, …), 1 for the
/// degree-≥-2 algebra (slots 3, 4, …). `budget_dim` of 0 selects the
/// default cap (200000).
///
/// # Safety
/// `out` must point to writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn gfc_slice_build(
    variant: c_int,
    weight: i64,
    budget_dim: u64,
    out: *mut *mut GfcSlice,
) -> GfcStatus {
    if out.is_null() {
        return GfcStatus::InvalidArgument;
    }
    let Some(variant) = variant_of(variant) else {
        return GfcStatus::InvalidArgument;
    };
    let opts = BuildOptions {
        budget_dim: if budget_dim == 0 { 200_000 } else { budget_dim as usize },
        max_degree: None,
    };
    match build_slice(variant, weight, &opts) {
        Ok(slice) => {
            unsafe { *out = Box::into_raw(Box::new(GfcSlice { slice })) };
            GfcStatus::Ok
        }
        Err(err) => status_of(&err),
    }
}

/// Releases a slice handle. Passing NULL is a no-op.
///
/// # Safety
/// `handle` must come from `gfc_slice_build` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn gfc_slice_free(handle: *mut GfcSlice) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Largest degree the slice carries.
///
/// # Safety
/// `handle` must be a live slice handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gfc_slice_max_degree(handle: *const GfcSlice, out: *mut u64) -> GfcStatus {
    let (Some(h), false) = (unsafe { handle.as_ref() }, out.is_null()) else {
        return GfcStatus::InvalidArgument;
    };
    unsafe { *out = h.slice.max_degree as u64 };
    GfcStatus::Ok
}

/// Cochain dimension at one degree (0 beyond the computed range).
///
/// # Safety
/// `handle` must be a live slice handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gfc_slice_dim(
    handle: *const GfcSlice,
    degree: u64,
    out: *mut u64,
) -> GfcStatus {
    let (Some(h), false) = (unsafe { handle.as_ref() }, out.is_null()) else {
        return GfcStatus::InvalidArgument;
    };
    unsafe { *out = h.slice.dim(degree as usize) as u64 };
    GfcStatus::Ok
}

/// Betti number at one degree.
///
/// # Safety
/// `handle` must be a live slice handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gfc_slice_betti(
    handle: *const GfcSlice,
    degree: u64,
    out: *mut u64,
) -> GfcStatus {
    let (Some(h), false) = (unsafe { handle.as_ref() }, out.is_null()) else {
        return GfcStatus::InvalidArgument;
    };
    let betti: BTreeMap<usize, usize> = h.slice.cohomology_dims();
    unsafe { *out = betti.get(&(degree as usize)).copied().unwrap_or(0) as u64 };
    GfcStatus::Ok
}

/// Euler characteristic Σ (−1)^d dim Cᵈ of the slice.
///
/// # Safety
/// `handle` must be a live slice handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gfc_slice_euler_characteristic(
    handle: *const GfcSlice,
    out: *mut i64,
) -> GfcStatus {
    let (Some(h), false) = (unsafe { handle.as_ref() }, out.is_null()) else {
        return GfcStatus::InvalidArgument;
    };
    unsafe { *out = h.slice.euler_characteristic() };
    GfcStatus::Ok
}

/// Full slice dump (degrees, profiles, coboundaries) as a JSON string.
///
/// # Safety
/// `handle` must be a live slice handle; `out` receives a string that the
/// caller must free with `gfc_string_free`.
#[no_mangle]
pub unsafe extern "C" fn gfc_slice_to_json(
    handle: *const GfcSlice,
    out: *mut *mut c_char,
) -> GfcStatus {
    let (Some(h), false) = (unsafe { handle.as_ref() }, out.is_null()) else {
        return GfcStatus::InvalidArgument;
    };
    unsafe { *out = into_c_string(h.slice.to_json().to_string()) };
    GfcStatus::Ok
}

/// Euler-characteristic series by the constant-term product formula as a
/// JSON string. `full` nonzero selects the series including t^-2 (n = 1
/// only).
///
/// # Safety
/// `out` receives a string to free with `gfc_string_free`.
#[no_mangle]
pub unsafe extern "C" fn gfc_euler_series_json(
    n: u32,
    tmax: i64,
    full: c_int,
    out: *mut *mut c_char,
) -> GfcStatus {
    if out.is_null() {
        return GfcStatus::InvalidArgument;
    }
    let result = if full != 0 {
        perchik_full_series(n as usize, tmax)
    } else {
        perchik_series(n as usize, tmax)
    };
    match result {
        Ok(series) => {
            unsafe { *out = into_c_string(series.to_json().to_string()) };
            GfcStatus::Ok
        }
        Err(err) => status_of(&err),
    }
}

/// Chain-level Euler series (the independent oracle), n = 1.
///
/// # Safety
/// `out` receives a string to free with `gfc_string_free`.
#[no_mangle]
pub unsafe extern "C" fn gfc_complex_euler_series_json(
    variant: c_int,
    tmax: i64,
    out: *mut *mut c_char,
) -> GfcStatus {
    if out.is_null() {
        return GfcStatus::InvalidArgument;
    }
    let Some(variant) = variant_of(variant) else {
        return GfcStatus::InvalidArgument;
    };
    match complex_euler_series(variant, tmax, &BuildOptions::default()) {
        Ok(series) => {
            unsafe { *out = into_c_string(series.to_json().to_string()) };
            GfcStatus::Ok
        }
        Err(err) => status_of(&err),
    }
}

/// Runs the factorization pipeline and returns its JSON report.
/// `VerificationFailed` means the report was produced but a check failed.
///
/// # Safety
/// `out` receives a string to free with `gfc_string_free`.
#[no_mangle]
pub unsafe extern "C" fn gfc_factorize_json(out: *mut *mut c_char) -> GfcStatus {
    if out.is_null() {
        return GfcStatus::InvalidArgument;
    }
    match factorize(&BuildOptions::default()) {
        Ok(report) => {
            unsafe { *out = into_c_string(report.to_json().to_string()) };
            if report.all_pass() {
                GfcStatus::Ok
            } else {
                GfcStatus::VerificationFailed
            }
        }
        Err(err) => status_of(&err),
    }
}

/// Runs a named verification suite ("tables", "gkf", "main-theorem",
/// "genfun", "properties", "all") and returns the reports as JSON.
/// `VerificationFailed` means some check failed.
///
/// # Safety
/// `suite` must be a NUL-terminated string; `out` receives a string to
/// free with `gfc_string_free`.
#[no_mangle]
pub unsafe extern "C" fn gfc_verify_json(
    suite: *const c_char,
    out: *mut *mut c_char,
) -> GfcStatus {
    if suite.is_null() || out.is_null() {
        return GfcStatus::InvalidArgument;
    }
    let Ok(suite) = unsafe { CStr::from_ptr(suite) }.to_str() else {
        return GfcStatus::InvalidArgument;
    };
    match run_suite(suite, &BuildOptions::default()) {
        Ok(reports) => {
            let json: Vec<serde_json::Value> = reports.iter().map(|r| r.to_json()).collect();
            unsafe { *out = into_c_string(serde_json::Value::Array(json).to_string()) };
            if reports.iter().all(|r| r.pass) {
                GfcStatus::Ok
            } else {
                GfcStatus::VerificationFailed
            }
        }
        Err(err) => status_of(&err),
    }
}

/// Releases a string returned by this library. Passing NULL is a no-op.
///
/// # Safety
/// `s` must have been returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gfc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
