//! Calls through the C ABI exactly as a foreign caller would.

use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use spiralguide_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = sg_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

#[test]
fn spiral_round_trip() {
    let mut s = ptr::null_mut();
    let json = cstr(r#"{"family": "archimedean", "a": 0.5}"#);
    assert_eq!(unsafe { sg_spiral_from_json(json.as_ptr(), &mut s) }, SgStatus::Ok);
    let mut r = 0.0;
    assert_eq!(unsafe { sg_spiral_radius(s, 4.0, &mut r) }, SgStatus::Ok);
    assert!((r - 2.0).abs() < 1e-14);
    let mut w = 0.0;
    assert_eq!(unsafe { sg_spiral_width(s, 10.0, &mut w) }, SgStatus::Ok);
    assert!((w - 0.5).abs() < 1e-14);
    let mut d = 0.0;
    assert_eq!(unsafe { sg_spiral_orthogonal_width(s, 30.0, &mut d) }, SgStatus::Ok);
    assert!(d > 0.0 && d < std::f64::consts::PI);
    let mut k = 0.0;
    assert_eq!(unsafe { sg_spiral_curvature(s, 30.0, &mut k) }, SgStatus::Ok);
    assert!(k > 0.0);

    assert_eq!(unsafe { sg_spiral_width(s, 1.0, &mut w) }, SgStatus::Geometry);
    assert!(last_error().contains("width"));
    unsafe { sg_spiral_free(s) };
}

#[test]
fn bad_inputs_report_status() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { sg_spiral_from_json(ptr::null(), &mut s) }, SgStatus::NullPointer);
    let junk = cstr("{not json");
    assert_eq!(unsafe { sg_spiral_from_json(junk.as_ptr(), &mut s) }, SgStatus::Config);
    assert!(s.is_null());
    let negative = cstr(r#"{"family": "archimedean", "a": -1}"#);
    assert_eq!(unsafe { sg_spiral_from_json(negative.as_ptr(), &mut s) }, SgStatus::Config);
    let bad_utf8 = [0xffu8, 0xfe, 0];
    assert_eq!(unsafe { sg_spiral_from_json(bad_utf8.as_ptr().cast(), &mut s) }, SgStatus::InvalidUtf8);
    let mut r = 0.0;
    assert_eq!(unsafe { sg_spiral_radius(ptr::null(), 1.0, &mut r) }, SgStatus::NullPointer);
    unsafe { sg_spiral_free(ptr::null_mut()) };
    unsafe { sg_spectrum_free(ptr::null_mut()) };
    assert_eq!(unsafe { sg_spectrum_len(ptr::null()) }, 0);
}

#[test]
fn spectrum_through_handles() {
    let cfg = cstr(
        r#"{"spec": {"family": "archimedean", "a": 0.5, "beta": 10.5},
            "mesh": {"n_theta_per_coil": 32, "n_rho": 8}, "theta_max": 35.0, "k": 3}"#,
    );
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { sg_spectrum_solve(cfg.as_ptr(), &mut h) }, SgStatus::Ok);
    assert_eq!(unsafe { sg_spectrum_len(h) }, 3);
    assert!(unsafe { sg_spectrum_dof(h) } > 100);
    let mut prev = 0.0;
    for i in 0..3 {
        let (mut e, mut r) = (0.0, 1.0);
        assert_eq!(unsafe { sg_spectrum_eigenvalue(h, i, &mut e) }, SgStatus::Ok);
        assert_eq!(unsafe { sg_spectrum_residual(h, i, &mut r) }, SgStatus::Ok);
        assert!(e > prev && e < 1.0);
        assert!(r < 1e-8);
        prev = e;
    }
    let mut e = 0.0;
    assert_eq!(unsafe { sg_spectrum_eigenvalue(h, 3, &mut e) }, SgStatus::OutOfRange);
    let mut t = 0.0;
    assert_eq!(unsafe { sg_spectrum_threshold(h, &mut t) }, SgStatus::Ok);
    assert_eq!(t, 1.0);
    unsafe { sg_spectrum_free(h) };

    let zero_k = cstr(r#"{"spec": {"family": "archimedean", "a": 0.5}, "k": 0}"#);
    assert_eq!(unsafe { sg_spectrum_solve(zero_k.as_ptr(), &mut h) }, SgStatus::Config);
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(sg_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/include/spiralguide.h");
    let header = std::fs::read_to_string(path).unwrap();
    for name in ["sg_spiral_from_json", "sg_spectrum_solve", "sg_spectrum_eigenvalue", "sg_last_error", "SG_STATUS_OK"] {
        assert!(header.contains(name), "{name} missing from header");
    }
    assert!(header.contains("typedef struct SgSpiral SgSpiral;"));
    // Compile the header as C when a compiler is around.
    if let Ok(out) = Command::new("cc").args(["-fsyntax-only", "-x", "c", "-std=c99", "-Wall", "-Werror", path]).output() {
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}
