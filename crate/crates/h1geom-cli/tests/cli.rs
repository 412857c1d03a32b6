//! End-to-end runs of the `h1geom` binary: artifacts, stdout routing, and
//! exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn h1geom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_h1geom"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn json_of(path: &Path) -> serde_json::Value {
    let text = std::fs::read_to_string(path).expect("artifact exists");
    serde_json::from_str(&text).expect("artifact is JSON")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const SQRT2: f64 = std::f64::consts::SQRT_2;

#[test]
fn trace_of_a_helicoid_ruling_has_a_tiny_straightness_column() {
    let prefix = tmp("trace_hel");
    let out = h1geom(&[
        "trace",
        "--surface",
        "helicoid",
        "--start",
        "0,0",
        "--range",
        "-2,2",
        "--step",
        "0.01",
        "--out",
        prefix.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let csv = std::fs::read_to_string(prefix.with_extension("csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "p1,p2,x,y,t,straightness,horizontality"
    );
    let mut rows = 0;
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        let straightness: f64 = cols[5].parse().unwrap();
        assert!(straightness <= 1e-10, "row {rows}: {straightness}");
        rows += 1;
    }
    assert!(rows > 100);

    let report = json_of(&prefix.with_extension("json"));
    assert_eq!(report["verdict"], "straight");
}

#[test]
fn trace_without_out_prints_csv_to_stdout() {
    let out = h1geom(&[
        "trace",
        "--surface",
        "helicoid",
        "--start",
        "0,0",
        "--range",
        "-0.1,0.1",
        "--step",
        "0.01",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("p1,p2,x,y,t,straightness,horizontality\n"));
}

#[test]
fn area_of_the_unit_slope_plane_is_sqrt_two() {
    let out = h1geom(&[
        "area",
        "--surface",
        "vertical_plane(1)",
        "--region",
        "0,1,0,1",
        "--grid",
        "201",
    ]);
    let report = stdout_json(&out);
    let value = report["value"].as_f64().unwrap();
    assert!((value - SQRT2).abs() <= 1e-8, "area {value}");
    assert_eq!(report["verdict"], "converged");

    let text = serde_json::to_string(&report).unwrap();
    assert!(
        text.contains("1.41421356"),
        "nine significant digits: {text}"
    );
}

#[test]
fn stability_sweep_of_the_helicoid_reports_a_negative_mode() {
    let out = h1geom(&["stability", "--surface", "helicoid", "--k-max", "64"]);
    let report = stdout_json(&out);
    assert_eq!(report["verdict"], "negative");
    assert!(report["value"].as_f64().unwrap() < 0.0);
    assert!(report["terms"]["first_negative_k"].as_f64().unwrap() >= 1.0);
}

#[test]
fn config_file_supplies_defaults_and_flags_override_them() {
    let cfg = tmp("area_cfg.json");
    std::fs::write(
        &cfg,
        r#"{"surface":"vertical_plane(1)","region":[0.0,1.0,0.0,1.0],"grid":[201,201]}"#,
    )
    .unwrap();

    let out = h1geom(&["area", "--config", cfg.to_str().unwrap()]);
    let value = stdout_json(&out)["value"].as_f64().unwrap();
    assert!((value - SQRT2).abs() <= 1e-8);

    let out = h1geom(&[
        "area",
        "--config",
        cfg.to_str().unwrap(),
        "--region",
        "0,2,0,2",
    ]);
    let value = stdout_json(&out)["value"].as_f64().unwrap();
    assert!((value - 4.0 * SQRT2).abs() <= 1e-7, "area {value}");
}

#[test]
fn variation_routes_agree_on_a_stationary_plane() {
    let out = h1geom(&[
        "variation",
        "--surface",
        "vertical_plane(0.5)",
        "--region",
        "-1,1,-1,1",
    ]);
    let report = stdout_json(&out);
    assert_eq!(report["verdict"], "consistent");
    assert!(report["value"].as_f64().unwrap().abs() <= 1e-5);
}

#[test]
fn bad_specs_exit_with_the_config_code() {
    let out = h1geom(&["analyze", "--surface", "sphere"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("config error"));

    let truncated = tmp("truncated.json");
    std::fs::write(&truncated, r#"{"kind":"t_graph""#).unwrap();
    let out = h1geom(&["analyze", "--surface", truncated.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let bad_var = tmp("bad_var.json");
    std::fs::write(
        &bad_var,
        r#"{"kind":"t_graph","formula":"x*z","domain":[[0.0,1.0],[0.0,1.0]]}"#,
    )
    .unwrap();
    let out = h1geom(&["analyze", "--surface", bad_var.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = h1geom(&["variation", "--surface", "helicoid"]);
    assert_eq!(out.status.code(), Some(2));

    let out = h1geom(&["area"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failed_computations_exit_with_the_computation_code() {
    let out = h1geom(&["trace", "--surface", "helicoid", "--start", "9,0"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("computation error"));
}

#[test]
fn verify_with_no_matching_checks_exits_zero() {
    let out = h1geom(&["verify", "--only", "no-such-check"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("0 passed, 0 failed"));
}

#[test]
fn verify_passes_a_plane_and_flags_a_curved_graph() {
    let out = h1geom(&["verify", "--surface", "vertical_plane(0.5)"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("[PASS] stationarity"));

    let curved = tmp("curved.json");
    std::fs::write(
        &curved,
        r#"{"kind":"intrinsic_graph","formula":"x + 0.1*x^2",
            "domain":[[-1.0,1.0],[-1.0,1.0]],"d1":"1 + 0.2*x","d2":"0"}"#,
    )
    .unwrap();
    let out = h1geom(&["verify", "--surface", curved.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("[FAIL] stationarity"));
}

#[test]
fn analyze_marks_the_singular_axis_of_the_paraboloid() {
    let prefix = tmp("ana_par");
    let out = h1geom(&[
        "analyze",
        "--surface",
        "paraboloid",
        "--region",
        "-0.5,0.5,-0.5,0.5",
        "--grid",
        "5",
        "--out",
        prefix.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let report = json_of(&prefix.with_extension("json"));
    assert_eq!(report["terms"]["singular_count"].as_f64().unwrap(), 5.0);
    assert!(report["verdict"]
        .as_str()
        .unwrap()
        .contains("singular-set-nonempty"));

    let csv = std::fs::read_to_string(prefix.with_extension("csv")).unwrap();
    let flagged = csv
        .lines()
        .skip(1)
        .filter(|l| l.ends_with("1.00000000e0"))
        .count();
    assert_eq!(flagged, 5);
}

#[test]
fn analyze_classifies_the_sign_of_the_stability_potential() {
    let prefix = tmp("ana_hel");
    let out = h1geom(&[
        "analyze",
        "--surface",
        "helicoid",
        "--out",
        prefix.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&prefix.with_extension("json"));
    assert!((report["terms"]["q_max"].as_f64().unwrap() - 4.0).abs() <= 1e-5);
    assert_eq!(report["verdict"], "regular; q-nonnegative");

    let prefix = tmp("ana_plane");
    let out = h1geom(&[
        "analyze",
        "--surface",
        "vertical_plane(0.3)",
        "--out",
        prefix.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&prefix.with_extension("json"));
    assert_eq!(report["verdict"], "regular; q-zero");
}

#[test]
fn repeated_runs_emit_identical_artifacts() {
    let a = tmp("det_a");
    let b = tmp("det_b");
    for prefix in [&a, &b] {
        let out = h1geom(&[
            "analyze",
            "--surface",
            "helicoid",
            "--grid",
            "21",
            "--out",
            prefix.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    for ext in ["json", "csv"] {
        let left = std::fs::read(a.with_extension(ext)).unwrap();
        let right = std::fs::read(b.with_extension(ext)).unwrap();
        assert_eq!(left, right, "{ext} artifacts differ between runs");
    }
}
