use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use cayley_ffi::*;

fn group(spec: &str) -> *mut CayleyGroup {
    let spec = CString::new(spec).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { cayley_group_new(spec.as_ptr(), &mut g) }, CayleyStatus::Ok);
    assert!(!g.is_null());
    g
}

fn last_error() -> String {
    let p = cayley_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn order_multiply_and_classes() {
    let g = group("sym:4");
    let (mut n, mut classes, mut prod) = (0usize, 0usize, 0usize);
    unsafe {
        assert_eq!(cayley_group_order(g, &mut n), CayleyStatus::Ok);
        assert_eq!(cayley_group_class_count(g, &mut classes), CayleyStatus::Ok);
        assert_eq!(cayley_group_multiply(g, 0, 0, &mut prod), CayleyStatus::Ok);
        assert_eq!(cayley_group_multiply(g, 24, 0, &mut prod), CayleyStatus::InvalidArgument);
        cayley_group_free(g);
    }
    assert_eq!((n, classes), (24, 5));
    assert!(last_error().contains("out of range"));
}

#[test]
fn degrees_with_small_and_large_buffers() {
    let g = group("alt:5");
    let mut buf = [0usize; 8];
    let mut len = 0usize;
    unsafe {
        assert_eq!(cayley_irrep_degrees(g, buf.as_mut_ptr(), 2, &mut len), CayleyStatus::BufferTooSmall);
        assert_eq!(len, 5);
        assert_eq!(cayley_irrep_degrees(g, buf.as_mut_ptr(), buf.len(), &mut len), CayleyStatus::Ok);
        cayley_group_free(g);
    }
    assert_eq!(&buf[..len], &[1, 3, 3, 4, 5]);
}

#[test]
fn bounds_and_estimate() {
    let g = group("cyclic:16");
    let mut b = CayleyBounds::default();
    let mut e = CayleyEstimate::default();
    unsafe {
        assert_eq!(cayley_bounds(g, &mut b), CayleyStatus::Ok);
        assert_eq!(cayley_estimate_norm(g, CayleyMethod::Block, 200, 3, &mut e), CayleyStatus::Ok);
        assert_eq!(cayley_estimate_norm(g, CayleyMethod::DirectReal, 1, 3, &mut e), CayleyStatus::InvalidArgument);
        cayley_group_free(g);
    }
    assert_eq!(b.n, 16);
    assert_eq!(b.sigma, 4.0);
    assert!((b.w_certificate - 4.0).abs() < 1e-8);
    assert!((b.m - 3.1147).abs() < 1e-3);
    assert_eq!(e.trials, 200);
    assert!(e.mean > 4.0 && e.std_error > 0.0);
}

#[test]
fn spencer_search() {
    let g = group("cyclic:8");
    let mut signs = [0i8; 8];
    let mut norm = 0.0;
    unsafe {
        let s = cayley_spencer(g, CayleySpencerMethod::BruteForce, 0, 0, signs.as_mut_ptr(), 8, &mut norm);
        assert_eq!(s, CayleyStatus::Ok);
        let s = cayley_spencer(g, CayleySpencerMethod::LocalSearch, 4, 0, signs.as_mut_ptr(), 7, &mut norm);
        assert_eq!(s, CayleyStatus::BufferTooSmall);
        cayley_group_free(g);
    }
    assert!(signs.iter().all(|&s| s == 1 || s == -1));
    assert!((norm - 12f64.sqrt()).abs() < 1e-9);
}

#[test]
fn error_statuses() {
    let mut g = ptr::null_mut();
    let bad = CString::new("nonsense:3").unwrap();
    let cap = CString::new("sym:8").unwrap();
    let nonprime = CString::new("psl2:9").unwrap();
    unsafe {
        assert_eq!(cayley_group_new(bad.as_ptr(), &mut g), CayleyStatus::Parse);
        assert!(g.is_null());
        assert_eq!(cayley_group_new(cap.as_ptr(), &mut g), CayleyStatus::OrderCap);
        assert!(last_error().contains("cap"));
        assert_eq!(cayley_group_new(nonprime.as_ptr(), &mut g), CayleyStatus::Parse);
        assert_eq!(cayley_group_new(ptr::null(), &mut g), CayleyStatus::NullPointer);
        let mut n = 0;
        assert_eq!(cayley_group_order(ptr::null(), &mut n), CayleyStatus::NullPointer);
        cayley_group_free(ptr::null_mut());
    }
    let a = group("alt:4");
    let mut signs = [0i8; 12];
    let mut norm = 0.0;
    unsafe {
        let s = cayley_spencer(a, CayleySpencerMethod::AbelianReduction, 2, 0, signs.as_mut_ptr(), 12, &mut norm);
        assert_eq!(s, CayleyStatus::NotAbelian);
        cayley_group_free(a);
    }
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "cayley.h"

int main(void) {
    CayleyGroup *g = NULL;
    if (cayley_group_new("alt:5", &g) != CAYLEY_STATUS_OK) return 1;
    size_t n = 0, len = 0, degrees[16];
    if (cayley_group_order(g, &n) != CAYLEY_STATUS_OK || n != 60) return 2;
    if (cayley_irrep_degrees(g, degrees, 16, &len) != CAYLEY_STATUS_OK || len != 5) return 3;
    CayleyBounds b;
    if (cayley_bounds(g, &b) != CAYLEY_STATUS_OK) return 4;
    printf("%zu %zu %zu %.6f\n", n, len, degrees[4], b.m);
    cayley_group_free(g);
    if (cayley_group_new("bogus", &g) != CAYLEY_STATUS_PARSE) return 5;
    printf("%s\n", cayley_last_error_message());
    return 0;
}
"#;

/// Compiles a C client against the generated header and the static library.
#[test]
fn c_client_links_against_header() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header_dir = manifest.join("include");
    assert!(header_dir.join("cayley.h").exists());
    // target/<profile>/deps/<test binary>
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libcayley_ffi.a");
    assert!(lib.exists(), "static library not found at {}", lib.display());
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let src = dir.join("client.c");
    let exe = dir.join("client");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&header_dir)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "client exited with {:?}", out.status);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("60 5 5 1.844112"));
    assert!(lines.next().unwrap().contains("bogus"));
}
