//! End-to-end tests of the CLI surface: spec parsing, exit codes, JSON
//! round-trips, and output determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_redprod")
}

/// Calibration file shared by every test, written once.
fn calibration_path() -> &'static Path {
    static PATH: OnceLock<PathBuf> = OnceLock::new();
    PATH.get_or_init(|| {
        let dir = std::env::temp_dir().join(format!("redprod-cli-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("calibration.json");
        let out = Command::new(bin())
            .args(["calibrate", "--out"])
            .arg(&path)
            .output()
            .unwrap();
        assert!(out.status.success(), "calibrate failed: {:?}", out);
        path
    })
}

fn write_spec(name: &str, contents: &str) -> PathBuf {
    let dir = calibration_path().parent().unwrap().to_path_buf();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn run_with_cal(args: &[&str]) -> Output {
    let mut all: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    all.push("--calibration".into());
    all.push(calibration_path().to_str().unwrap().into());
    Command::new(bin()).args(&all).output().unwrap()
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({}): {}",
            e,
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

const A1_N3: &str = r#"{"group": {"series": "A", "rank": 1}, "xi": [["1"], ["1"], ["3/2"]]}"#;

#[test]
fn volume_reports_exact_fractions() {
    let spec = write_spec("a1n3.json", A1_N3);
    let out = run_with_cal(&["volume", spec.to_str().unwrap()]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["dim_reduced"], 0);
    assert_eq!(v["raw"]["re"], "-1");
    assert_eq!(v["raw"]["im"], "0");
    assert_eq!(v["value"]["re"], "1");
    assert_eq!(v["volume"], "1");
    assert_eq!(v["float"], 1.0);
    // exact fraction strings re-parse to identical rationals
    let volume: String = v["volume"].as_str().unwrap().into();
    assert_eq!(volume.parse::<i64>().unwrap(), 1);
}

#[test]
fn volume_is_deterministic() {
    let spec = write_spec("a1n3_det.json", A1_N3);
    let first = run_with_cal(&["volume", spec.to_str().unwrap()]);
    let second = run_with_cal(&["volume", spec.to_str().unwrap()]);
    assert_eq!(first.stdout, second.stdout);
    assert!(first.status.success());
}

#[test]
fn non_generic_names_the_tuple() {
    let spec = write_spec(
        "a1wall.json",
        r#"{"group": {"series": "A", "rank": 1}, "xi": [["1"], ["1"], ["2"]]}"#,
    );
    let out = run_with_cal(&["volume", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert_eq!(v["error"], "non_generic");
    let displays: Vec<&str> = v["violations"]
        .as_array()
        .unwrap()
        .iter()
        .filter_map(|x| x["display"].as_str())
        .collect();
    assert!(displays.contains(&"(+,+,-)"), "got {:?}", displays);
}

#[test]
fn malformed_field_reports_path_and_exits_1() {
    let spec = write_spec(
        "bad_rank.json",
        r#"{"group": {"series": "A", "rank": "two"}, "xi": []}"#,
    );
    let out = run_with_cal(&["volume", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["error"], "parse");
    assert!(v["message"].as_str().unwrap().contains("group.rank"));
}

const A2_PAIR: &str = r#"{
  "group": {"series": "A", "rank": 2},
  "xi": [["23/4","27/4"], ["75/16","19/4"], ["61/8","69/8"]],
  "zeta": [{"orbit": 1, "weight": ["1","0"], "power": 1}]
}"#;

#[test]
fn pair_reports_real_rational() {
    let spec = write_spec("a2pair.json", A2_PAIR);
    let out = run_with_cal(&["pair", spec.to_str().unwrap()]);
    assert!(out.status.success(), "{:?}", out);
    let v = stdout_json(&out);
    assert_eq!(v["degree"], 2);
    assert_eq!(v["dim_reduced"], 2);
    assert_eq!(v["mode"], "weyl-twisted");
    let num = v["intersection_number"].as_str().unwrap();
    assert_eq!(num, "4/3");
}

#[test]
fn pair_degree_mismatch_exits_4_unless_allowed() {
    let spec = write_spec(
        "a2deg4.json",
        r#"{
          "group": {"series": "A", "rank": 2},
          "xi": [["23/4","27/4"], ["75/16","19/4"], ["61/8","69/8"]],
          "zeta": [{"orbit": 1, "weight": ["1","0"], "power": 2}]
        }"#,
    );
    let strict = run_with_cal(&["pair", spec.to_str().unwrap()]);
    assert_eq!(strict.status.code(), Some(4));
    assert_eq!(stdout_json(&strict)["error"], "degree_mismatch");

    let allowed = run_with_cal(&["pair", spec.to_str().unwrap(), "--allow-any-degree"]);
    assert!(allowed.status.success());
    assert_eq!(stdout_json(&allowed)["intersection_number"], "0");
}

#[test]
fn pair_both_modes_side_by_side() {
    let spec = write_spec("a2both.json", A2_PAIR);
    let out = run_with_cal(&["pair", spec.to_str().unwrap(), "--both-modes"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let modes = v["modes"].as_array().unwrap();
    assert_eq!(modes.len(), 2);
    assert_eq!(modes[0]["mode"], "literal");
    assert_eq!(modes[1]["mode"], "weyl-twisted");
    assert_eq!(modes[1]["value"]["re"], "4/3");
}

const A1_N4: &str = r#"{"group": {"series": "A", "rank": 1}, "xi": [["1"], ["1"], ["1"], ["1"]]}"#;

#[test]
fn sweep_tracks_chambers_and_walls() {
    let spec = write_spec("a1n4sweep.json", A1_N4);
    let out = run_with_cal(&[
        "sweep",
        spec.to_str().unwrap(),
        "--param",
        "4",
        "--from",
        "1/4",
        "--to",
        "11/4",
        "--steps",
        "11",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "xi,volume,chamber");
    // the wall at t = 1 is flagged and omitted from chambers
    assert!(lines.iter().any(|l| l.ends_with(",,non-generic")));
    let chambers: Vec<&str> = lines[1..]
        .iter()
        .filter(|l| !l.ends_with("non-generic"))
        .map(|l| l.rsplit(',').next().unwrap())
        .collect();
    assert!(chambers.contains(&"0") && chambers.contains(&"1"));
}

#[test]
fn sweep_single_chamber() {
    let spec = write_spec("a1n4sweep1.json", A1_N4);
    let out = run_with_cal(&[
        "sweep",
        spec.to_str().unwrap(),
        "--param",
        "4",
        "--from",
        "9/8",
        "--to",
        "15/8",
        "--steps",
        "5",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().skip(1) {
        assert!(line.ends_with(",0"), "unexpected row {:?}", line);
    }
}

#[test]
fn check_passes_with_calibration() {
    let out = run_with_cal(&["check"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "check failed:\n{}", text);
    let pass_lines = text.lines().filter(|l| l.starts_with("PASS")).count();
    let fail_lines = text.lines().filter(|l| l.starts_with("FAIL")).count();
    assert_eq!((pass_lines, fail_lines), (8, 0), "{}", text);
}

#[test]
fn check_fails_without_calibration() {
    let out = run(&["check", "--calibration", "/nonexistent/calibration.json"]);
    assert_eq!(out.status.code(), Some(5));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("CalibrationMissing"), "{}", text);
}

#[test]
fn check_fault_injection_names_quadrature() {
    let out = run_with_cal(&["check", "--inject-fault", "rank1"]);
    assert_eq!(out.status.code(), Some(5));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("quadrature mismatch"), "{}", text);
}

#[test]
fn output_is_identical_across_worker_counts() {
    let spec = write_spec("a2det.json", A2_PAIR);
    let run_with_threads = |n: &str| {
        Command::new(bin())
            .env("REDPROD_THREADS", n)
            .args([
                "pair",
                spec.to_str().unwrap(),
                "--calibration",
                calibration_path().to_str().unwrap(),
            ])
            .output()
            .unwrap()
    };
    let single = run_with_threads("1");
    let parallel = run_with_threads("4");
    assert!(single.status.success());
    assert_eq!(single.stdout, parallel.stdout);
}

#[test]
fn calibration_roundtrips() {
    let text = std::fs::read_to_string(calibration_path()).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["version"], 1);
    assert_eq!(v["groups"]["A1"]["c0"], "-1/64");
    assert_eq!(v["groups"]["A1"]["c1"], "4");
    assert_eq!(v["groups"]["A2"]["c1"], "1");
}
