use std::ffi::{CStr, CString};
use std::ptr;

use gsc_ffi::*;

fn take_string(p: *mut libc::c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { gsc_string_free(p) };
    s
}

fn builtin(name: &str) -> *mut GscSpec {
    let name = CString::new(name).unwrap();
    let mut spec = ptr::null_mut();
    assert_eq!(unsafe { gsc_spec_builtin(name.as_ptr(), &mut spec) }, GscStatus::Ok);
    spec
}

#[test]
fn carpet_round_trip_and_validation() {
    let spec = builtin("sc");
    unsafe {
        assert_eq!(gsc_spec_dim(spec), 2);
        assert_eq!(gsc_spec_side(spec), 3);
        assert_eq!(gsc_spec_len(spec), 8);
        let json = take_string(gsc_spec_to_json(spec));
        let c = CString::new(json).unwrap();
        let mut again = ptr::null_mut();
        assert_eq!(gsc_spec_from_json(c.as_ptr(), &mut again), GscStatus::Ok);
        assert_eq!(take_string(gsc_spec_hash(spec)), take_string(gsc_spec_hash(again)));
        gsc_spec_free(again);

        let mut pass = 0;
        let mut report = ptr::null_mut();
        assert_eq!(gsc_spec_validate(spec, &mut pass, &mut report), GscStatus::Ok);
        assert_eq!(pass, 1);
        let report: serde_json::Value = serde_json::from_str(&take_string(report)).unwrap();
        assert_eq!(report["pass"], true);

        let mut holds = 0;
        assert_eq!(gsc_spec_bb99(spec, &mut holds), GscStatus::Ok);
        assert_eq!(holds, 1);
        gsc_spec_free(spec);
    }
}

#[test]
fn counterexample_fails_slab_condition() {
    let mut spec = ptr::null_mut();
    unsafe {
        assert_eq!(gsc_spec_counterexample(3, 2, &mut spec), GscStatus::Ok);
        assert_eq!(gsc_spec_side(spec), 12);
        let mut holds = 1;
        assert_eq!(gsc_spec_bb99(spec, &mut holds), GscStatus::Ok);
        assert_eq!(holds, 0);
        gsc_spec_free(spec);
        assert_eq!(gsc_spec_counterexample(2, 2, &mut spec), GscStatus::InvalidArgument);
    }
}

#[test]
fn errors_set_status_and_message() {
    let bad = CString::new("{\"d\": 2, \"l\": 3, \"S\": [[0, 0], [3, 0]]}").unwrap();
    let mut spec = ptr::null_mut();
    unsafe {
        assert_eq!(gsc_spec_from_json(bad.as_ptr(), &mut spec), GscStatus::InvalidSpec);
        assert!(spec.is_null());
        assert!(!take_string(gsc_last_error()).is_empty());
        let junk = CString::new("{").unwrap();
        assert_eq!(gsc_spec_from_json(junk.as_ptr(), &mut spec), GscStatus::Parse);
        assert_eq!(gsc_spec_from_json(ptr::null(), &mut spec), GscStatus::NullPointer);
        assert_eq!(gsc_spec_dim(ptr::null()), 0);
        assert!(gsc_solution_energy(ptr::null()).is_nan());
        gsc_spec_free(ptr::null_mut());
        gsc_string_free(ptr::null_mut());
    }
}

#[test]
fn carpet_solution_values() {
    let spec = builtin("sc");
    let mut sol = ptr::null_mut();
    unsafe {
        assert_eq!(gsc_solve_faces(spec, 1, 0, 1e-12, 1 << 20, &mut sol), GscStatus::Ok);
        assert_eq!(gsc_solution_level(sol), 1);
        assert!((gsc_solution_energy(sol) - 1.0).abs() < 1e-12);
        let n = gsc_solution_len(sol);
        assert_eq!(n, 8);
        let mut small = vec![0.0; 4];
        assert_eq!(gsc_solution_values(sol, small.as_mut_ptr(), 4), GscStatus::BufferTooSmall);
        let mut buf = vec![-1.0; n];
        assert_eq!(gsc_solution_values(sol, buf.as_mut_ptr(), n), GscStatus::Ok);
        assert!(buf.iter().all(|v| (0.0..=1.0).contains(v)));
        gsc_solution_free(sol);

        assert_eq!(gsc_solve_faces(spec, 9, 0, 1e-10, 1 << 20, &mut sol), GscStatus::Budget);
        gsc_spec_free(spec);
    }
}

#[test]
fn sequence_and_walk() {
    let spec = builtin("sc");
    unsafe {
        let mut json = ptr::null_mut();
        assert_eq!(gsc_resistance_sequence_json(spec, 2, 1e-10, 1 << 20, &mut json), GscStatus::Ok);
        let report: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(report["levels"].as_array().unwrap().len(), 2);
        assert!(report["ratios"][0].as_f64().unwrap() < 8.0 / 9.0);

        let (mut mean, mut se) = (0.0, 0.0);
        assert_eq!(gsc_walk_crossing(spec, 1, 2000, 3, 1 << 20, &mut mean, &mut se), GscStatus::Ok);
        assert!((mean - 25.0 / 3.0).abs() < 5.0 * se);
        gsc_spec_free(spec);
    }
}

#[test]
fn header_declares_the_interface() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/gsc.h")).unwrap();
    for name in [
        "typedef struct GscSpec GscSpec;",
        "GSC_STATUS_OK = 0",
        "gsc_spec_from_json",
        "gsc_solve_faces",
        "gsc_solution_values",
        "gsc_walk_crossing",
        "gsc_last_error",
    ] {
        assert!(header.contains(name), "{name} missing from gsc.h");
    }
    let version = unsafe { CStr::from_ptr(gsc_version()) }.to_str().unwrap();
    assert_eq!(version, env!("CARGO_PKG_VERSION"));
}

#[test]
fn c_program_links_against_the_static_library() {
    let dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = dir.join("libgsc_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let root = env!("CARGO_MANIFEST_DIR");
    let exe = tempfile::tempdir().unwrap();
    let bin = exe.path().join("smoke");
    let status = std::process::Command::new("cc")
        .arg(format!("{root}/tests/c/smoke.c"))
        .arg(format!("-I{root}/include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("a C compiler named cc");
    assert!(status.success());
    let out = std::process::Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "smoke exited with {:?}", out.status);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "20 2.000000000000\n");
}
