use std::ffi::{c_char, CStr, CString};
use std::ptr;

use abelkit_ffi::*;

fn parse(s: &str) -> *mut AbelkitGroup {
    let c = CString::new(s).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { abelkit_group_parse(c.as_ptr(), &mut g) }, AbelkitStatus::Ok);
    g
}

fn take(s: *mut c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { abelkit_string_free(s) };
    out
}

fn last_error() -> String {
    let p = abelkit_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

#[test]
fn parse_format_order_sum() {
    let a = parse("Z/2 + Z/3");
    let b = parse("Z/4");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { abelkit_group_format(a, &mut s) }, AbelkitStatus::Ok);
    assert_eq!(take(s), "Z/6");
    let mut n = 0u64;
    assert_eq!(unsafe { abelkit_group_order(a, &mut n) }, AbelkitStatus::Ok);
    assert_eq!(n, 6);
    let mut sum = ptr::null_mut();
    assert_eq!(unsafe { abelkit_group_direct_sum(a, b, &mut sum) }, AbelkitStatus::Ok);
    assert_eq!(unsafe { abelkit_group_format(sum, &mut s) }, AbelkitStatus::Ok);
    assert_eq!(take(s), "Z/2 + Z/12");
    unsafe {
        abelkit_group_free(a);
        abelkit_group_free(b);
        abelkit_group_free(sum);
        abelkit_group_free(ptr::null_mut());
    }
}

#[test]
fn decide_reports_witness() {
    let g = parse("Z/4");
    let prop = CString::new("rickart").unwrap();
    let mut json = ptr::null_mut();
    let st = unsafe { abelkit_decide(prop.as_ptr(), g, ptr::null(), 0, &mut json) };
    assert_eq!(st, AbelkitStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
    assert_eq!(v["holds"], false);
    assert_eq!(v["witness"]["matrix"], serde_json::json!([[2]]));

    let z = parse("Z");
    let prop = CString::new("strongly-rickart").unwrap();
    let st = unsafe { abelkit_decide(prop.as_ptr(), g, z, 0, &mut json) };
    assert_eq!(st, AbelkitStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
    assert_eq!(v["holds"], true);
    unsafe {
        abelkit_group_free(g);
        abelkit_group_free(z);
    }
}

#[test]
fn classify_json() {
    let g = parse("Z");
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { abelkit_classify(g, &mut json) }, AbelkitStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
    assert_eq!(v["strongly_self_rickart"], true);
    assert_eq!(v["dual_strongly_self_rickart"], false);
    assert_eq!(v["reason"], "infinite-cyclic");
    unsafe { abelkit_group_free(g) };
}

#[test]
fn error_codes() {
    let bad = CString::new("Z/(").unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { abelkit_group_parse(bad.as_ptr(), &mut g) }, AbelkitStatus::ParseError);
    assert!(g.is_null());
    assert!(last_error().contains("parse error"));

    assert_eq!(unsafe { abelkit_group_parse(ptr::null(), &mut g) }, AbelkitStatus::NullPointer);

    let z = parse("Z");
    let mut n = 0u64;
    assert_eq!(unsafe { abelkit_group_order(z, &mut n) }, AbelkitStatus::InfiniteGroup);

    let prop = CString::new("rickart").unwrap();
    let mut json = ptr::null_mut();
    let st = unsafe { abelkit_decide(prop.as_ptr(), z, ptr::null(), 0, &mut json) };
    assert_eq!(st, AbelkitStatus::InfiniteHomSet);
    assert!(json.is_null());

    let v = parse("Z/2 + Z/2");
    assert_eq!(unsafe { abelkit_decide(prop.as_ptr(), v, ptr::null(), 1, &mut json) }, AbelkitStatus::BudgetExceeded);

    let unknown = CString::new("bogus").unwrap();
    assert_eq!(unsafe { abelkit_decide(unknown.as_ptr(), v, ptr::null(), 0, &mut json) }, AbelkitStatus::UnknownProperty);
    assert!(last_error().contains("bogus"));
    unsafe {
        abelkit_group_free(z);
        abelkit_group_free(v);
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(abelkit_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_api_and_compiles() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/abelkit.h");
    let text = std::fs::read_to_string(header).unwrap();
    for f in [
        "abelkit_group_parse",
        "abelkit_group_free",
        "abelkit_group_order",
        "abelkit_group_format",
        "abelkit_group_direct_sum",
        "abelkit_decide",
        "abelkit_classify",
        "abelkit_string_free",
        "abelkit_last_error",
        "ABELKIT_STATUS_BUDGET_EXCEEDED",
    ] {
        assert!(text.contains(f), "{f} missing from header");
    }
    // Syntax-check as C when a compiler is available.
    let Ok(out) = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-x", "c", header])
        .output()
    else {
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
