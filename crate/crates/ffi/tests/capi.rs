use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use rydberg_vqd::circuit::{schedule, Modality};
use rydberg_vqd::gates::{Axis, CzProtocol, NativeOp};
use rydberg_vqd::noise::DeviceParams;
use rydberg_vqd::transpile::NativeInstr;
use rydberg_vqd_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(rvqd_last_error()) }.to_string_lossy().into_owned()
}

/// Two-qubit circuit: pi pulses on both qubits, then an ARP CZ.
fn excited_pair_json(params: &DeviceParams) -> CString {
    let ops = [
        NativeOp::rotation(Axis::X, std::f64::consts::PI, 0, params),
        NativeOp::rotation(Axis::X, std::f64::consts::PI, 1, params),
        NativeOp::cz(CzProtocol::Arp, 0, 1, params),
    ];
    let instrs: Vec<_> = ops.into_iter().map(NativeInstr::Op).collect();
    let sc = schedule(&instrs, 2, Modality::Reconfigurable { tau_move: 100.0 }, params).unwrap();
    CString::new(sc.to_json().unwrap()).unwrap()
}

#[test]
fn execute_round_trip() {
    unsafe {
        let params = rvqd_params_noiseless();
        let json = excited_pair_json(&DeviceParams::noiseless());
        let mut circuit = ptr::null_mut();
        assert_eq!(rvqd_circuit_from_json(json.as_ptr(), &mut circuit), RvqdStatus::Ok);
        assert_eq!(rvqd_circuit_n_qubits(circuit), 2);
        assert!(rvqd_circuit_wall_clock(circuit) > 300.0);

        let mut state = ptr::null_mut();
        assert_eq!(rvqd_execute(circuit, params, RvqdGateModel::Native, &mut state), RvqdStatus::Ok);
        assert_eq!(rvqd_state_n_qubits(state), 2);
        // ARP CZ on |11> keeps 0.9986^2 of the population.
        assert!((rvqd_state_loss(state) - (1.0 - 0.9986f64.powi(2))).abs() < 1e-9);
        assert!((rvqd_state_trace(state) + rvqd_state_loss(state) - 1.0).abs() < 1e-12);

        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(rvqd_state_element(state, 3, 3, &mut re, &mut im), RvqdStatus::Ok);
        assert!((re - 0.9986f64.powi(2)).abs() < 1e-9 && im.abs() < 1e-12);
        assert_eq!(rvqd_state_element(state, 4, 0, &mut re, &mut im), RvqdStatus::OutOfRange);

        let measured = [0usize, 1];
        let mut probs = [0.0; 4];
        assert_eq!(rvqd_state_probabilities(state, measured.as_ptr(), 2, probs.as_mut_ptr(), 4), RvqdStatus::Ok);
        assert!((probs[3] - re).abs() < 1e-15);
        assert_eq!(
            rvqd_state_probabilities(state, measured.as_ptr(), 2, probs.as_mut_ptr(), 3),
            RvqdStatus::OutOfRange
        );

        let mut ideal = ptr::null_mut();
        assert_eq!(rvqd_execute(circuit, params, RvqdGateModel::Ideal, &mut ideal), RvqdStatus::Ok);
        assert!(rvqd_state_loss(ideal).abs() < 1e-12);

        rvqd_state_free(ideal);
        rvqd_state_free(state);
        rvqd_circuit_free(circuit);
        rvqd_params_free(params);
    }
}

#[test]
fn params_json_and_validation() {
    unsafe {
        let mut params = ptr::null_mut();
        let ok = CString::new(r#"{"t1": 5.0}"#).unwrap();
        assert_eq!(rvqd_params_from_json(ok.as_ptr(), &mut params), RvqdStatus::Ok);
        let text = rvqd_params_to_json(params);
        let back: DeviceParams = serde_json::from_str(CStr::from_ptr(text).to_str().unwrap()).unwrap();
        assert_eq!(back, DeviceParams { t1: 5.0, ..DeviceParams::default() });
        rvqd_string_free(text);
        rvqd_params_free(params);

        let bad = CString::new(r#"{"t1": 4.0, "t2": 10.0}"#).unwrap();
        let mut none = ptr::null_mut();
        assert_eq!(rvqd_params_from_json(bad.as_ptr(), &mut none), RvqdStatus::Config);
        assert!(none.is_null());
        assert!(last_error().contains("t2"), "{}", last_error());

        let unknown = CString::new(r#"{"t3": 1.0}"#).unwrap();
        assert_eq!(rvqd_params_from_json(unknown.as_ptr(), &mut none), RvqdStatus::Json);
    }
}

#[test]
fn null_handles_are_reported() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(rvqd_circuit_from_json(ptr::null(), &mut out), RvqdStatus::NullPointer);
        assert!(last_error().contains("json"));
        assert_eq!(rvqd_execute(ptr::null(), ptr::null(), RvqdGateModel::Native, &mut out.cast()), RvqdStatus::NullPointer);
        assert_eq!(rvqd_state_n_qubits(ptr::null()), 0);
        assert!(rvqd_state_trace(ptr::null()).is_nan());
        assert!(rvqd_params_to_json(ptr::null()).is_null());
        rvqd_state_free(ptr::null_mut());
        rvqd_run_free(ptr::null_mut());
        rvqd_string_free(ptr::null_mut());
    }
}

#[test]
fn malformed_circuit_is_rejected() {
    unsafe {
        let json = CString::new(r#"{"n_qubits": 2, "layers": "nope"}"#).unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(rvqd_circuit_from_json(json.as_ptr(), &mut out), RvqdStatus::Json);
        assert!(out.is_null());
    }
}

#[test]
fn small_benchmark_run() {
    unsafe {
        let cfg = CString::new(r#"{"benchmark": "bv", "master_seed": 5, "qubit_counts": [3], "noiseless": true}"#).unwrap();
        let mut run = ptr::null_mut();
        assert_eq!(rvqd_run_benchmark(cfg.as_ptr(), &mut run), RvqdStatus::Ok, "{}", last_error());
        assert_eq!(rvqd_run_record_count(run), 8);
        let mut rec = RvqdRecord::default();
        for i in 0..8 {
            assert_eq!(rvqd_run_record(run, i, &mut rec), RvqdStatus::Ok);
            assert_eq!(rec.size, 3);
            assert!((rec.raw - 1.0).abs() < 1e-9);
        }
        assert_eq!(rvqd_run_record(run, 8, &mut rec), RvqdStatus::OutOfRange);
        let id = rvqd_run_record_id(run, 5);
        assert_eq!(CStr::from_ptr(id).to_str().unwrap(), "101");
        rvqd_string_free(id);

        assert_eq!(rvqd_run_summary_count(run), 1);
        let mut s = RvqdSummary::default();
        assert_eq!(rvqd_run_summary(run, 0, &mut s), RvqdStatus::Ok);
        assert_eq!((s.size, s.pass_raw, s.pass_corrected), (3, -1, -1));
        rvqd_run_free(run);

        let no_seed = CString::new(r#"{"benchmark": "bv"}"#).unwrap();
        assert_eq!(rvqd_run_benchmark(no_seed.as_ptr(), &mut run), RvqdStatus::Config);
        assert!(last_error().contains("master_seed"));
    }
}

#[test]
fn version_matches_package() {
    let v = unsafe { CStr::from_ptr(rvqd_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn header_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include")
}

fn have_cc() -> bool {
    Command::new("cc").arg("--version").output().is_ok_and(|o| o.status.success())
}

#[test]
fn header_compiles_as_c_and_cpp() {
    if !have_cc() {
        eprintln!("no C compiler on PATH; header check skipped");
        return;
    }
    for (lang, std) in [("c", "-std=c99"), ("c++", "-std=c++11")] {
        let out = Command::new("cc")
            .args(["-x", lang, std, "-Wall", "-Werror", "-fsyntax-only", "-I"])
            .arg(header_dir())
            .arg(header_dir().join("rydberg_vqd.h"))
            .output()
            .unwrap();
        assert!(out.status.success(), "{lang}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn c_program_links_against_static_library() {
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("librydberg_vqd_ffi.a");
    if !have_cc() || !lib.exists() {
        eprintln!("C toolchain or {} unavailable; link check skipped", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include <string.h>
#include "rydberg_vqd.h"
int main(void) {
    RvqdRun *run = NULL;
    const char *cfg = "{\"benchmark\": \"bv\", \"master_seed\": 1, \"qubit_counts\": [2], \"noiseless\": true}";
    if (rvqd_run_benchmark(cfg, &run) != RVQD_STATUS_OK) { fprintf(stderr, "%s\n", rvqd_last_error()); return 1; }
    RvqdRecord rec;
    if (rvqd_run_record(run, 3, &rec) != RVQD_STATUS_OK) return 2;
    printf("%zu %zu %.6f\n", rvqd_run_record_count(run), rec.size, rec.raw);
    rvqd_run_free(run);
    RvqdParams *p = NULL;
    if (rvqd_params_from_json("{\"t2\": 100}", &p) != RVQD_STATUS_CONFIG) return 3;
    return strlen(rvqd_last_error()) > 0 ? 0 : 4;
}
"#,
    )
    .unwrap();
    let exe = dir.path().join("capi_demo");
    let out = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(header_dir())
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(out.status.success(), "link: {}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "exit {:?}: {}", run.status, String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "4 2 1.000000");
}
