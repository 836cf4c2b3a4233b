//! Exercises the C surface from Rust: status codes, out-strings, error
//! reporting, and handle lifecycle.

use std::ffi::{CStr, CString, c_char};
use std::ptr;

use mdrkit_capi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(p: *mut c_char) -> String {
    assert!(!p.is_null(), "expected an out-string");
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { mdr_string_free(p) };
    s
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(mdr_last_error()) }.to_str().unwrap().to_string()
}

#[test]
fn version_is_the_package_version() {
    let v = unsafe { CStr::from_ptr(mdr_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn oracle_statuses_and_witness() {
    let claim = cstr("[p, p->q] |> [q]");
    let mut witness: *mut c_char = ptr::null_mut();
    let s = unsafe { mdr_oracle_mv(claim.as_ptr(), 7, 200, 0, &mut witness) };
    assert_eq!(s, MdrStatus::Ok);
    assert!(witness.is_null(), "valid verdicts carry no witness");

    let claim = cstr("[p] |> [p, p]");
    let s = unsafe { mdr_oracle_mv(claim.as_ptr(), 11, 100, 0, &mut witness) };
    assert_eq!(s, MdrStatus::No);
    assert_eq!(unsafe { take(witness) }, "p=1/2\nlhs=1/2 rhs=0");

    let bad = cstr("[p ->");
    let s = unsafe { mdr_oracle_mv(bad.as_ptr(), 11, 100, 0, ptr::null_mut()) };
    assert_eq!(s, MdrStatus::Error);
    assert!(!last_error().is_empty());

    let s = unsafe { mdr_oracle_mv(ptr::null(), 11, 100, 0, ptr::null_mut()) };
    assert_eq!(s, MdrStatus::Error);
    assert!(last_error().contains("NULL"), "{}", last_error());
}

#[test]
fn systems_derive_check_and_split() {
    let sys = unsafe { mdr_system_builtin(cstr("MV").as_ptr()) };
    assert!(!sys.is_null());

    let mut cert: *mut c_char = ptr::null_mut();
    let s = unsafe { mdr_derive(sys, cstr("[p*q] |> [p, q]").as_ptr(), 2, 4_000, &mut cert) };
    assert_eq!(s, MdrStatus::Ok);
    let cert_text = unsafe { take(cert) };
    assert!(cert_text.contains("FusElim"), "{cert_text}");

    let cert = cstr(&cert_text);
    let mut reason: *mut c_char = ptr::null_mut();
    let s = unsafe { mdr_check_certificate(sys, cert.as_ptr(), ptr::null(), &mut reason) };
    assert_eq!(s, MdrStatus::Ok);
    assert!(reason.is_null());

    let wrong = cstr("[p] |> [p]");
    let s = unsafe { mdr_check_certificate(sys, cert.as_ptr(), wrong.as_ptr(), &mut reason) };
    assert_eq!(s, MdrStatus::No);
    assert!(unsafe { take(reason) }.starts_with("rejected"));

    let s = unsafe { mdr_derive(sys, cstr("[p] |> [p, p]").as_ptr(), 1, 50, ptr::null_mut()) };
    assert_eq!(s, MdrStatus::Inconclusive);
    unsafe { mdr_system_free(sys) };

    // A single-conclusion system splits its modus-ponens certificate.
    let sys = unsafe { mdr_system_builtin(cstr("MV_s").as_ptr()) };
    let mut cert: *mut c_char = ptr::null_mut();
    let s = unsafe { mdr_derive(sys, cstr("[p, p->q] |> [q]").as_ptr(), 1, 4_000, &mut cert) };
    assert_eq!(s, MdrStatus::Ok);
    let cert_text = unsafe { take(cert) };
    let (mut tree, mut rest): (*mut c_char, *mut c_char) = (ptr::null_mut(), ptr::null_mut());
    let s = unsafe {
        mdr_split(sys, cstr(&cert_text).as_ptr(), cstr("q").as_ptr(), &mut tree, &mut rest)
    };
    assert_eq!(s, MdrStatus::Ok);
    let tree_text = unsafe { take(tree) };
    assert!(tree_text.contains("hyp: p"), "{tree_text}");
    assert!(unsafe { take(rest) }.contains("claim: [] |> []"));

    let mut reason: *mut c_char = ptr::null_mut();
    let s = unsafe {
        mdr_check_tree(
            sys,
            cstr(&tree_text).as_ptr(),
            cstr("[p, p->q] |> [q]").as_ptr(),
            &mut reason,
        )
    };
    assert_eq!(s, MdrStatus::Ok);
    unsafe { mdr_system_free(sys) };
}

#[test]
fn system_loading_reports_errors() {
    let sys = unsafe { mdr_system_builtin(cstr("NoSuch").as_ptr()) };
    assert!(sys.is_null());
    assert!(!last_error().is_empty());

    let sys = unsafe { mdr_system_load(cstr("axiom A: [] |> [p->p]\n").as_ptr()) };
    assert!(!sys.is_null());
    unsafe { mdr_system_free(sys) };
    unsafe { mdr_system_free(ptr::null_mut()) };
    unsafe { mdr_string_free(ptr::null_mut()) };
}

#[test]
fn parse_and_hyper() {
    let mut canonical: *mut c_char = ptr::null_mut();
    let s = unsafe { mdr_parse_consecution(cstr("[p ->q] |> [ p ]").as_ptr(), &mut canonical) };
    assert_eq!(s, MdrStatus::Ok);
    assert_eq!(unsafe { take(canonical) }, "[p -> q] |> [p]");

    let structures = cstr(
        "algebra B\nelements 0 1\nconst c0=0 c1=1\n\nhypermatrix H\nalgebra B\nfilter-gen [0,1]\n",
    );
    let claim = cstr("[c0] |> [c1]");
    let mut witness: *mut c_char = ptr::null_mut();
    let s = unsafe { mdr_hyper(structures.as_ptr(), claim.as_ptr(), 0, &mut witness) };
    assert_eq!(s, MdrStatus::Ok, "plain mode holds");
    assert!(witness.is_null());

    let s = unsafe { mdr_hyper(structures.as_ptr(), claim.as_ptr(), 1, &mut witness) };
    assert_eq!(s, MdrStatus::No, "contextual mode fails");
    let text = unsafe { take(witness) };
    assert!(text.contains("H:") && text.contains("context [1]"), "{text}");
}
