//! Black-box tests of the command line binary: output shapes, exit codes,
//! and byte-level determinism of the sweep and report formats.

use std::process::{Command, Output};

use quartic_heat::quadrature::kernel_1d;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quartic-heat"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn value_line(out: &str) -> f64 {
    out.lines()
        .find_map(|l| l.strip_prefix("value"))
        .expect("value line")
        .trim()
        .parse()
        .expect("value parses")
}

#[test]
fn kernel_origin_anchor() {
    let o = run(&[
        "kernel", "--alpha", "1", "--beta", "0", "--gamma", "1", "--x", "0,0", "--t", "1",
    ]);
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("8.32419838"), "unexpected value in: {out}");
    assert!(out.contains("method direct"), "unexpected method in: {out}");
}

#[test]
fn kernel_factorizes_when_decoupled() {
    let o = run(&["kernel", "--beta", "0", "--x", "1,1", "--t", "0.01"]);
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(&o));
    let got = value_line(&stdout(&o));
    let g1 = kernel_1d(1.0, 0.01).unwrap();
    assert!(
        ((got - g1 * g1) / (g1 * g1)).abs() < 1e-8,
        "got {got}, want {}",
        g1 * g1
    );
}

#[test]
fn kernel_rejects_non_elliptic_coefficients() {
    let o = run(&["kernel", "--beta", "-2", "--t", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("non-elliptic"),
        "stderr: {}",
        stderr(&o)
    );
}

#[test]
fn kernel_rejects_bad_time_and_point() {
    let o = run(&["kernel", "--beta", "0", "--t", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["kernel", "--beta", "0", "--x", "1", "--t", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn kernel_reports_unreachable_tolerance() {
    // The error estimate carries a roundoff floor at ~1e-15 of the
    // integrated mass, so this target cannot be certified.
    let o = run(&[
        "kernel", "--beta", "0", "--x", "0,0", "--t", "1", "--tol", "1e-16",
    ]);
    assert_eq!(o.status.code(), Some(3), "stderr: {}", stderr(&o));
    assert!(
        stderr(&o).contains("tolerance not achieved"),
        "stderr: {}",
        stderr(&o)
    );
}

#[test]
fn asymptotic_reports_interior_model() {
    let o = run(&["asymptotic", "--beta", "1.5", "--x", "0.7,0.3"]);
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("\"model\": \"interior\""), "{out}");
    assert!(out.contains("\"f_space\""), "{out}");
    let o = run(&["asymptotic", "--beta", "4", "--x", "1,0"]);
    assert!(stdout(&o).contains("\"model\": \"special_direction\""));
}

#[test]
fn asymptotic_rejects_off_pattern_point_outside_interior_window() {
    let o = run(&["asymptotic", "--beta", "4", "--x", "0.7,0.3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn compare_is_byte_identical_across_runs() {
    let args = [
        "compare",
        "--beta",
        "4",
        "--direction",
        "axis",
        "--lambda-min",
        "5",
        "--lambda-max",
        "9",
        "--steps",
        "5",
    ];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0), "stderr: {}", stderr(&first));
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
    let out = stdout(&first);
    assert!(
        out.starts_with("# quartic-heat v1, beta=4, direction=axis\n"),
        "{out}"
    );
    assert!(
        out.lines().nth(1) == Some("lambda,F_numeric_scaled,G_asymptotic_scaled,abs_diff"),
        "{out}"
    );
    assert_eq!(out.lines().count(), 7);
}

#[test]
fn compare_writes_file_and_respects_out_flag() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let o = run(&[
        "compare",
        "--beta",
        "-0.5",
        "--direction",
        "bisector",
        "--lambda-min",
        "5",
        "--lambda-max",
        "7",
        "--steps",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(&o));
    assert!(stdout(&o).is_empty());
    let content = std::fs::read_to_string(&path).unwrap();
    assert!(content.starts_with("# quartic-heat v1, beta=-0.5, direction=bisector\n"));
    assert_eq!(content.lines().count(), 5);
}

fn numeric_column(csv: &str) -> Vec<f64> {
    csv.lines()
        .skip(2)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn compare_numeric_column_is_method_independent_below_the_switch() {
    let base = [
        "compare",
        "--beta",
        "4",
        "--direction",
        "axis",
        "--lambda-min",
        "5",
        "--lambda-max",
        "8",
        "--steps",
        "4",
        "--tol",
        "1e-9",
        "--method",
    ];
    let direct = run(&[&base[..], &["direct"]].concat());
    let shifted = run(&[&base[..], &["shifted"]].concat());
    assert_eq!(direct.status.code(), Some(0), "stderr: {}", stderr(&direct));
    assert_eq!(
        shifted.status.code(),
        Some(0),
        "stderr: {}",
        stderr(&shifted)
    );
    let d = numeric_column(&stdout(&direct));
    let s = numeric_column(&stdout(&shifted));
    assert_eq!(d.len(), 4);
    for (a, b) in d.iter().zip(&s) {
        assert!(((a - b) / b).abs() < 1e-6, "direct {a} vs shifted {b}");
    }
}

#[test]
fn compare_rejects_bad_sweep_bounds() {
    let o = run(&[
        "compare",
        "--beta",
        "4",
        "--direction",
        "axis",
        "--lambda-min",
        "0.5",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&[
        "compare",
        "--beta",
        "4",
        "--direction",
        "axis",
        "--steps",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["compare", "--beta", "4"]);
    assert_eq!(o.status.code(), Some(2), "needs a direction or a point");
}

#[test]
fn compare_generic_ray_uses_interior_model() {
    let o = run(&[
        "compare",
        "--beta",
        "1.5",
        "--x",
        "0.7,0.3",
        "--lambda-min",
        "19",
        "--lambda-max",
        "21",
        "--steps",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(&o));
    let out = stdout(&o);
    assert!(
        out.starts_with("# quartic-heat v1, beta=1.5, direction=generic(0.7,0.3)\n"),
        "{out}"
    );
}

#[test]
fn verify_is_deterministic_and_clean() {
    let first = run(&["verify", "all", "--seed", "42"]);
    assert_eq!(first.status.code(), Some(0), "stderr: {}", stderr(&first));
    let second = run(&["verify", "all", "--seed", "42"]);
    assert_eq!(first.stdout, second.stdout);
    assert!(stderr(&first).is_empty());
    let report: serde_json::Value = serde_json::from_str(&stdout(&first)).unwrap();
    assert_eq!(report["seed"], 42);
    assert!(report["checks"].as_array().unwrap().len() >= 15);
}

#[test]
fn verify_single_suite_runs() {
    let o = run(&["verify", "saddles", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let names: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(
        names.iter().all(|n| n.contains("saddle")
            || n.contains("contour")
            || n.contains("interior")
            || n.contains("time_space")),
        "{names:?}"
    );
}

#[test]
fn field_analyzes_csv_and_rejects_empty_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("field.csv");
    std::fs::write(&path, "x1,x2,alpha,beta,gamma\n0,0,4,-1,1\n1,0,1,4,1\n").unwrap();
    let o = run(&["field", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["k_star"], 48.0);
    assert_eq!(report["regime_histogram"]["subconvex"], 1);

    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "x1,x2,alpha,beta,gamma\n").unwrap();
    let o = run(&["field", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let garbled = dir.path().join("garbled.csv");
    std::fs::write(&garbled, "x1,x2,alpha,beta,gamma\n0,0,not_a_number,1,1\n").unwrap();
    let o = run(&["field", garbled.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
