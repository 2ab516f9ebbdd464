//! End-to-end tests of the `pouwin` binary: exit codes, JSON/CSV surfaces,
//! and agreement with direct library calls.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use pouwin::constructions::{build_n2, dual_coeffs_window, sine_squared_base, DualPair};
use pouwin::pou::Window;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pouwin"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pouwin-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn construct_n2_writes_window_and_reports_order() {
    let out = scratch("n2.json");
    let output = run(&["construct", "--family", "n2", "--L", "2", "--out", out.to_str().unwrap()]);
    let report = stdout_json(&output);
    assert_eq!(report["smoothness"]["order_L"], 4);
    assert!(report["pou_residual"].as_f64().unwrap() <= 1e-12);

    // the written JSON is byte-identical to serializing the library object
    let expected = Window::new(build_n2(&sine_squared_base(2), 2).unwrap(), 2).unwrap();
    let mut expected_json = serde_json::to_string_pretty(&expected).unwrap();
    expected_json.push('\n');
    assert_eq!(fs::read_to_string(&out).unwrap(), expected_json);
}

#[test]
fn construct_tight_rejects_l_equal_n() {
    let output = run(&["construct", "--family", "tight", "--N", "2", "--L", "2", "--b", "0.5"]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("L <= N-1"), "stderr: {stderr}");
}

#[test]
fn construct_requires_family_params() {
    let output = run(&["construct", "--family", "p1"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn construct_tight_valid() {
    let output = run(&["construct", "--family", "tight", "--N", "2", "--L", "1", "--b", "0.5"]);
    let report = stdout_json(&output);
    assert_eq!(report["family"], "tight");
    assert!(report["window"]["coeffs"].is_array());
}

#[test]
fn dualize_and_check_pair() {
    let g_path = scratch("g.json");
    let pair_path = scratch("pair.json");
    run(&["construct", "--family", "n2", "--L", "2", "--out", g_path.to_str().unwrap()]);
    let output = run(&[
        "dualize", "coeffs",
        "--input", g_path.to_str().unwrap(),
        "--b", "1/3",
        "--a", "1/3,1/3,1/3",
        "--out", pair_path.to_str().unwrap(),
    ]);
    let report = stdout_json(&output);
    assert_eq!(report["dual"], true);

    // pair file is byte-identical to the library serialization
    let g = Window::new(build_n2(&sine_squared_base(2), 2).unwrap(), 2).unwrap();
    let b = 1.0 / 3.0;
    let h = dual_coeffs_window(&g, b, &[b, b, b]).unwrap();
    let mut expected = serde_json::to_string_pretty(&DualPair { g, h, b }).unwrap();
    expected.push('\n');
    assert_eq!(fs::read_to_string(&pair_path).unwrap(), expected);

    let output = run(&["check", "--input", pair_path.to_str().unwrap()]);
    let report = stdout_json(&output);
    assert_eq!(report["duality"]["dual"], true);
    assert!(report["duality"]["max_residual"].as_f64().unwrap() <= 1e-10);
    // painless formula does not apply to the dual: span 4 but b = 1/3 > 1/4
    assert!(report["frame_bounds"]["h"].is_null());
    assert!(report["frame_bounds"]["g"]["A"].as_f64().unwrap() > 0.0);
}

#[test]
fn dualize_rejects_oversized_b() {
    let g_path = scratch("g-reject.json");
    run(&["construct", "--family", "n2", "--L", "1", "--out", g_path.to_str().unwrap()]);
    let output = run(&[
        "dualize", "coeffs",
        "--input", g_path.to_str().unwrap(),
        "--b", "0.4",
        "--a", "0.4,0.4,0.4",
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn check_unnormalized_sine_fourth_fails_pou() {
    let w_path = scratch("sin4.json");
    run(&[
        "construct", "--family", "sine-power", "--N", "2", "--L", "4",
        "--out", w_path.to_str().unwrap(),
    ]);
    let output = run(&["check", "--input", w_path.to_str().unwrap()]);
    let report = stdout_json(&output);
    assert!(report["pou_residual"].as_f64().unwrap() >= 0.2);
}

#[test]
fn check_constant_window() {
    let w_path = scratch("constant.json");
    fs::write(
        &w_path,
        r#"{"period":1,"coeffs":[[0,0.5,0.0]],"support":[0,2]}"#,
    )
    .unwrap();
    let output = run(&["check", "--input", w_path.to_str().unwrap()]);
    let report = stdout_json(&output);
    assert!(report["pou_residual"].as_f64().unwrap() <= 1e-15);
    assert_eq!(report["smoothness"]["order_L"], 0);
}

#[test]
fn check_malformed_json_is_io_error() {
    let path = scratch("bad.json");
    fs::write(&path, "{not json").unwrap();
    let output = run(&["check", "--input", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn export_pair_csv_supports() {
    let g_path = scratch("g-export.json");
    let pair_path = scratch("pair-export.json");
    run(&["construct", "--family", "n2", "--L", "2", "--out", g_path.to_str().unwrap()]);
    run(&[
        "dualize", "coeffs",
        "--input", g_path.to_str().unwrap(),
        "--b", "1/3",
        "--a", "1/3,1/3,1/3",
        "--out", pair_path.to_str().unwrap(),
    ]);
    let output = run(&[
        "export",
        "--input", pair_path.to_str().unwrap(),
        "--from", "-1.5", "--to", "3.5", "--step", "0.01",
    ]);
    assert!(output.status.success());
    let csv = String::from_utf8(output.stdout).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "x,g,h");
    assert_eq!(lines.len(), 1 + 501);
    for line in &lines[1..] {
        let fields: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        let (x, g, h) = (fields[0], fields[1], fields[2]);
        if x < 0.0 || x > 2.0 {
            assert_eq!(g, 0.0, "g nonzero outside [0,2] at x = {x}");
        }
        if x < -1.0 || x > 3.0 {
            assert_eq!(h, 0.0, "h nonzero outside [-1,3] at x = {x}");
        }
    }
}

#[test]
fn export_empty_grid_is_header_only() {
    let w_path = scratch("w-empty.json");
    run(&["construct", "--family", "p1", "--N", "3", "--out", w_path.to_str().unwrap()]);
    let output = run(&[
        "export", "--input", w_path.to_str().unwrap(),
        "--from", "1.0", "--to", "0.0", "--step", "0.01",
    ]);
    assert!(output.status.success());
    assert_eq!(String::from_utf8(output.stdout).unwrap(), "x,g\n");
}

#[test]
fn frame_demo_reports_reconstruction_error() {
    let coeffs = scratch("coeffs.csv");
    let output = run(&["frame-demo", "--m-max", "8", "--coeffs-out", coeffs.to_str().unwrap()]);
    let report = stdout_json(&output);
    let error = report["errors"][0]["relative_l2_error"].as_f64().unwrap();
    assert!(error < 5e-3, "error = {error}");

    let csv = fs::read_to_string(&coeffs).unwrap();
    assert_eq!(csv.lines().next(), Some("m,n,re,im"));
    // 2·8+1 modulations × 11 translates
    assert_eq!(csv.lines().count(), 1 + 17 * 11);
}
