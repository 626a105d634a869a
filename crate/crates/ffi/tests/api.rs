use std::ffi::{CStr, CString};
use std::ptr;

use vecpart_ffi::*;

fn take(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { vp_string_free(s) };
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(vp_last_error()) }.to_str().unwrap().to_string()
}

fn make(dim: usize, coords: &[i64]) -> Result<*mut VpConfig, VpStatus> {
    let mut h = ptr::null_mut();
    let st = unsafe { vp_config_new(dim, coords.as_ptr(), coords.len() / dim.max(1), &mut h) };
    if st == VpStatus::Ok {
        Ok(h)
    } else {
        assert!(h.is_null());
        Err(st)
    }
}

#[test]
fn partition_function_and_delta() {
    let h = make(2, &[1, 0, 0, 1, 1, 1]).unwrap();
    assert_eq!(unsafe { vp_config_dim(h) }, 2);
    assert_eq!(unsafe { vp_config_len(h) }, 3);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { vp_delta(h, &mut s) }, VpStatus::Ok);
    assert_eq!(take(s), "3");
    for (p, want) in [([2i64, 1], "2"), ([5, 5], "6"), ([-1, 0], "0")] {
        assert_eq!(unsafe { vp_partition_function(h, p.as_ptr(), &mut s) }, VpStatus::Ok);
        assert_eq!(take(s), want);
    }
    unsafe { vp_config_free(h) };
}

#[test]
fn spline_values_are_exact_fractions() {
    let h = make(2, &[1, 0, 0, 1, 1, 1]).unwrap();
    let mut s = ptr::null_mut();
    let p = CString::new("5/2,7/3").unwrap();
    assert_eq!(unsafe { vp_spline_eval(h, p.as_ptr(), &mut s) }, VpStatus::Ok);
    assert_eq!(take(s), "7/3");
    let bad = CString::new("1,2,3").unwrap();
    assert_eq!(unsafe { vp_spline_eval(h, bad.as_ptr(), &mut s) }, VpStatus::InvalidInput);
    assert!(last_error().contains("coordinates"));
    unsafe { vp_config_free(h) };
}

#[test]
fn json_reports() {
    let h = make(2, &[1, 0, 0, 1, 1, 1]).unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { vp_structure_json(h, &mut s) }, VpStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(v["result"]["counts"]["topes"], 6);
    assert_eq!(v["result"]["counts"]["big_cells"], 3);
    let p = CString::new("2,1").unwrap();
    assert_eq!(unsafe { vp_localize_json(h, p.as_ptr(), 5, &mut s) }, VpStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(v["result"]["q"], "n2 + 1");
    assert_eq!(v["passed"], true);
    let on_wall = CString::new("1,1").unwrap();
    assert_eq!(unsafe { vp_localize_json(h, on_wall.as_ptr(), 5, &mut s) }, VpStatus::InvalidInput);
    unsafe { vp_config_free(h) };
}

#[test]
fn error_codes() {
    assert_eq!(make(2, &[1, 0, 2, 0]).unwrap_err(), VpStatus::InvalidInput);
    assert!(last_error().contains("span"), "{}", last_error());
    assert_eq!(make(1, &[0]).unwrap_err(), VpStatus::InvalidInput);
    let many: Vec<i64> = vec![1; 11];
    assert_eq!(make(1, &many).unwrap_err(), VpStatus::GuardLimit);
    let h = make(1, &[2, -1]).unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { vp_partition_function(h, [3i64].as_ptr(), &mut s) }, VpStatus::NotPointed);
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { vp_delta(h, &mut s) }, VpStatus::Ok);
    assert_eq!(take(s), "3");
    assert!(last_error().is_empty());
    unsafe { vp_config_free(h) };
    assert_eq!(unsafe { vp_delta(ptr::null(), &mut s) }, VpStatus::NullArgument);
    assert_eq!(unsafe { vp_config_new(2, ptr::null(), 2, &mut ptr::null_mut()) }, VpStatus::NullArgument);
    unsafe { vp_config_free(ptr::null_mut()) };
    unsafe { vp_string_free(ptr::null_mut()) };
    assert_eq!(unsafe { vp_config_dim(ptr::null()) }, 0);
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(vp_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
