use std::process::Command;

use conicpart::run::{Report, Status};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_conicpart"));
    c.env("RUST_LOG", "warn");
    c
}

fn run_json(args: &[&str]) -> (i32, Report) {
    let out = bin().args(args).output().unwrap();
    let report = serde_json::from_slice(&out.stdout).expect("json report on stdout");
    (out.status.code().unwrap(), report)
}

#[test]
fn full_q5_exits_zero() {
    let (code, r) = run_json(&["--p", "5", "--command", "full"]);
    assert_eq!(code, 0);
    assert!(r.passed());
    assert_eq!(r.check("orbit_census").unwrap().observed, "ExternalPencil:15 ConicPointPencil:6");
    let orbits = &r.payload["orbits"]["orbits"];
    assert_eq!(orbits.as_array().unwrap().len(), 2);
    assert!(orbits[0]["canonical_form"]["lines"][0].as_str().unwrap().starts_with('['));
}

#[test]
fn cover_mode_q7() {
    let (code, r) = run_json(&["--p", "7", "--command", "full", "--mode", "cover", "--size", "6"]);
    assert_eq!(code, 0);
    assert_eq!(r.check("orbit_census").unwrap().observed, "ExternalPencil:28 ExceptionalCover:14");
}

#[test]
fn lemmas_q9_skips_congruence_checks() {
    let (code, r) = run_json(&["--p", "3", "--h", "2", "--command", "lemmas"]);
    assert_eq!(code, 0);
    assert_eq!(r.check("character_matrix_rank").unwrap().status, Status::Skipped);
}

#[test]
fn explicit_modulus_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = bin()
        .args(["--p", "3", "--h", "2", "--modulus", "2,2,1", "--command", "construct", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Report = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r.config.modulus, Some(vec![2, 2, 1]));
    assert_eq!(r.check("baer_partition_exact").unwrap().status, Status::Pass);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| bin().args(args).output().unwrap().status.code().unwrap();
    assert_eq!(code(&["--p", "2", "--h", "2", "--command", "lemmas"]), 2);
    assert_eq!(code(&["--p", "5", "--mode", "cover"]), 2);
    assert_eq!(code(&["--p", "5", "--command", "nonsense"]), 2);
    assert_eq!(code(&["--p", "3", "--h", "2", "--modulus", "1,0,1,1"]), 2);
    assert_eq!(code(&["--p", "11", "--command", "search", "--node-budget", "50"]), 3);
}

#[test]
fn thread_count_does_not_change_the_report() {
    let (_, a) = run_json(&["--p", "7", "--command", "full", "--threads", "1"]);
    let (_, mut b) = run_json(&["--p", "7", "--command", "full", "--threads", "3"]);
    b.config.threads = 1;
    assert_eq!(a.to_json_without_timings(), b.to_json_without_timings());
}
