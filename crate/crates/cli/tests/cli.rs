use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn qrmt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qrmt")).args(args).env_remove("QRMT_THREADS").output().expect("spawn qrmt")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Header and numeric rows of a CSV with `#` metadata.
fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<Option<f64>>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| if c.is_empty() { None } else { Some(c.parse::<f64>().unwrap()) }).collect())
        .collect();
    (header, rows)
}

fn manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

fn digest(dir: &Path, file: &str) -> String {
    manifest(dir)["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .find(|o| o["path"] == file)
        .map(|o| o["sha256"].as_str().unwrap().to_string())
        .unwrap()
}

fn out_arg(dir: &Path) -> String {
    dir.to_str().unwrap().to_string()
}

#[test]
fn sample_writes_one_sorted_row_per_matrix() {
    let tmp = TempDir::new().unwrap();
    let o = qrmt(&[
        "sample",
        "--n",
        "20",
        "--lambda",
        "1",
        "--alpha",
        "auto",
        "--count",
        "10000",
        "--seed",
        "7",
        "--out",
        &out_arg(tmp.path()),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let (header, rows) = read_csv(&tmp.path().join("spectra.csv"));
    assert_eq!(header.len(), 20);
    assert_eq!(rows.len(), 10_000);
    for r in &rows {
        assert_eq!(r.len(), 20);
        assert!(r.windows(2).all(|w| w[0].unwrap() <= w[1].unwrap()));
    }
    let text = fs::read_to_string(tmp.path().join("manifest.json")).unwrap();
    let order = ["tool_version", "command", "params", "master_seed", "sample_count", "started", "finished", "outputs"];
    let at: Vec<usize> = order.iter().map(|k| text.find(&format!("\n  \"{k}\":")).unwrap()).collect();
    assert!(at.windows(2).all(|w| w[0] < w[1]), "{text}");
    let m = manifest(tmp.path());
    assert_eq!(m["master_seed"], 7);
    assert_eq!(m["sample_count"], 10_000);
    assert_eq!(m["params"]["alpha"], 10.0);
}

#[test]
fn same_seed_gives_identical_digest_for_any_thread_count() {
    let (a, b, c) = (TempDir::new().unwrap(), TempDir::new().unwrap(), TempDir::new().unwrap());
    let base = ["sample", "--n", "8", "--lambda", "0.7", "--count", "500", "--raw"];
    for (dir, threads) in [(&a, "1"), (&b, "4"), (&c, "0")] {
        let mut args = base.to_vec();
        let out = out_arg(dir.path());
        args.extend(["--seed", "7", "--threads", threads, "--out", &out]);
        assert_eq!(code(&qrmt(&args)), 0);
    }
    for file in ["spectra.csv", "matrices.csv"] {
        assert_eq!(digest(a.path(), file), digest(b.path(), file));
        assert_eq!(digest(a.path(), file), digest(c.path(), file));
    }
    let other = TempDir::new().unwrap();
    let mut args = base.to_vec();
    let out = out_arg(other.path());
    args.extend(["--seed", "8", "--out", &out]);
    assert_eq!(code(&qrmt(&args)), 0);
    assert_ne!(digest(a.path(), "spectra.csv"), digest(other.path(), "spectra.csv"));
}

#[test]
fn raw_matrices_have_upper_triangle_columns() {
    let tmp = TempDir::new().unwrap();
    let o = qrmt(&[
        "sample",
        "--n",
        "3",
        "--q",
        "0",
        "--alpha",
        "1",
        "--count",
        "50",
        "--raw",
        "--out",
        &out_arg(tmp.path()),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let (header, rows) = read_csv(&tmp.path().join("matrices.csv"));
    assert_eq!(header, ["h1_1", "h1_2", "h1_3", "h2_2", "h2_3", "h3_3"]);
    // q = 0, N = 3: lambda = -1 - f/2 = -4, so tr H^2 < -lambda/alpha = 4
    for r in rows {
        let v: Vec<f64> = r.into_iter().map(Option::unwrap).collect();
        let tr2 = v[0] * v[0] + v[3] * v[3] + v[5] * v[5] + 2.0 * (v[1] * v[1] + v[2] * v[2] + v[4] * v[4]);
        assert!(tr2 < 4.0);
    }
}

#[test]
fn q_above_q_max_is_a_parameter_error() {
    let o = qrmt(&["sample", "--q", "1.9", "--n", "3"]);
    assert_eq!(code(&o), 2);
    let err = stderr(&o);
    assert!(err.contains("q_max"), "{err}");
    assert_eq!(err.trim_end().lines().count(), 1, "{err}");
}

#[test]
fn wrong_regime_and_bad_flags_are_parameter_errors() {
    assert_eq!(code(&qrmt(&["density", "--n", "3", "--q", "0"])), 2);
    assert_eq!(code(&qrmt(&["sample", "--n", "3"])), 2);
    assert_eq!(code(&qrmt(&["sample", "--n", "3", "--q", "0.5", "--lambda", "1"])), 2);
    assert_eq!(code(&qrmt(&["sample", "--n", "3", "--lambda", "1", "--alpha", "-1"])), 2);
    assert_eq!(code(&qrmt(&["gap", "--n", "5", "--lambda", "1", "--s-max", "6"])), 2);
}

#[test]
fn unwritable_output_is_an_io_error() {
    let tmp = TempDir::new().unwrap();
    let blocker = tmp.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let out = blocker.join("sub");
    let o = qrmt(&["sample", "--n", "3", "--lambda", "1", "--count", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
}

#[test]
fn density_curve_is_even() {
    let tmp = TempDir::new().unwrap();
    let o =
        qrmt(&["density", "--n", "50", "--lambda", "0.75", "--points", "201", "--svg", "--out", &out_arg(tmp.path())]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let (header, rows) = read_csv(&tmp.path().join("curve.csv"));
    assert_eq!(header, ["x", "y", "err"]);
    let n = rows.len();
    for i in 0..n {
        let (a, b) = (&rows[i], &rows[n - 1 - i]);
        assert_eq!(a[0].unwrap(), -b[0].unwrap());
        assert!((a[1].unwrap() - b[1].unwrap()).abs() <= 1e-10 * a[1].unwrap().abs().max(1.0));
    }
    assert!(fs::read_to_string(tmp.path().join("plot.svg")).unwrap().starts_with("<svg"));
    assert_eq!(manifest(tmp.path())["outputs"].as_array().unwrap().len(), 2);
}

#[test]
fn gap_curve_starts_at_zero_one() {
    let tmp = TempDir::new().unwrap();
    let o = qrmt(&["gap", "--n", "20", "--lambda", "1", "--points", "41", "--out", &out_arg(tmp.path())]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let (_, rows) = read_csv(&tmp.path().join("curve.csv"));
    assert_eq!((rows[0][0], rows[0][1]), (Some(0.0), Some(1.0)));
    assert!((rows.last().unwrap()[0].unwrap() - 4.0).abs() < 1e-8);
    assert!(rows.windows(2).all(|w| w[1][1] <= w[0][1]));
}

#[test]
fn element_curve_is_cauchy_at_half() {
    let tmp = TempDir::new().unwrap();
    let o = qrmt(&[
        "element",
        "--n",
        "10",
        "--lambda",
        "0.5",
        "--alpha",
        "0.5",
        "--x-max",
        "20",
        "--points",
        "81",
        "--out",
        &out_arg(tmp.path()),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let (_, rows) = read_csv(&tmp.path().join("curve.csv"));
    assert_eq!(rows.len(), 81);
    for r in rows {
        let (x, y) = (r[0].unwrap(), r[1].unwrap());
        assert!((y - 1.0 / (PI * (1.0 + x * x))).abs() < 1e-8, "x={x}");
    }
}

#[test]
fn json_curve_format() {
    let tmp = TempDir::new().unwrap();
    let o = qrmt(&[
        "element",
        "--n",
        "4",
        "--lambda",
        "0.5",
        "--alpha",
        "0.5",
        "--char-fn",
        "--points",
        "11",
        "--x-max",
        "5",
        "--format",
        "json",
        "--out",
        &out_arg(tmp.path()),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let c: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("curve.json")).unwrap()).unwrap();
    assert_eq!(c["kind"], "char_fn");
    let xs = c["abscissae"].as_array().unwrap();
    let ys = c["values"].as_array().unwrap();
    for (x, y) in xs.iter().zip(ys) {
        let (k, f) = (x.as_f64().unwrap(), y.as_f64().unwrap());
        assert!((f - (-k).exp()).abs() < 1e-9);
    }
}

#[test]
fn fig1_has_four_curves_and_a_reference() {
    let tmp = TempDir::new().unwrap();
    let o = qrmt(&["reproduce", "fig1", "--samples", "200", "--out", &out_arg(tmp.path())]);
    let (header, rows) = read_csv(&tmp.path().join("fig1_curves.csv"));
    assert_eq!(header.len(), 1 + 4 + 1);
    assert!(header[1..5].iter().all(|h| h.starts_with("rho_lambda_")));
    assert_eq!(header[5], "semicircle_reference");
    assert_eq!(rows.len(), 501);
    let report = fs::read_to_string(tmp.path().join("fig1_report.txt")).unwrap();
    assert_eq!(report.lines().count(), 2 + 4);
    let expected = if report.contains("FAIL") { 4 } else { 0 };
    assert_eq!(code(&o), expected, "{}", stdout(&o));
    assert!(tmp.path().join("fig1_overlay.csv").exists());
    assert_eq!(manifest(tmp.path())["params"].as_array().unwrap().len(), 4);
}

#[test]
fn fig2_asymptote_is_exact_and_report_lists_deltas() {
    let tmp = TempDir::new().unwrap();
    let o = qrmt(&["reproduce", "fig2", "--samples", "2000", "--seed", "5", "--out", &out_arg(tmp.path())]);
    let (header, rows) = read_csv(&tmp.path().join("fig2.csv"));
    assert_eq!(header, ["theta", "s", "analytic", "asymptote", "goe", "simulated", "simulated_std_error"]);
    for r in rows.iter().skip(1) {
        let s = r[1].unwrap();
        assert_eq!(r[3].unwrap(), 1.0 / (2.0 * s * s));
        assert!(r[5].is_some());
    }
    assert_eq!(rows[0][3], Some(f64::INFINITY));
    let report = fs::read_to_string(tmp.path().join("fig2_report.txt")).unwrap();
    assert!(report.contains("max |E_hat - E| on s in [0, 4]"));
    assert!(report.contains("s^2 E(s) on s in [5, 10]"));
    let expected = if report.contains("FAIL") { 4 } else { 0 };
    assert_eq!(code(&o), expected, "{}", stdout(&o));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("fig2_report.json")).unwrap()).unwrap();
    assert_eq!(json["criteria"].as_array().unwrap().len(), 3);
}

#[test]
fn verify_is_deterministic_and_passes() {
    let a = qrmt(&["verify", "--suite", "all", "--seed", "7"]);
    let b = qrmt(&["verify", "--suite", "all", "--seed", "7", "--threads", "2"]);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).starts_with("TAP version 13\n"));
    assert!(!stdout(&a).contains("not ok"));
}

#[test]
fn specfun_suite_has_bessel_line() {
    let o = qrmt(&["verify", "--suite", "specfun"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().any(|l| l.starts_with("ok ") && l.contains("K_{1/2}(1)")));
}

#[test]
fn zero_tolerance_induces_failure() {
    let o = qrmt(&["verify", "--suite", "specfun", "--tolerance", "0"]);
    assert_eq!(code(&o), 4);
    assert!(stdout(&o).contains("not ok"));
}

#[test]
fn verify_rehashes_manifest_outputs() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(code(&qrmt(&["gap", "--n", "10", "--lambda", "2", "--points", "5", "--out", &out_arg(tmp.path())])), 0);
    let m = tmp.path().join("manifest.json");
    let ok = qrmt(&["verify", "--manifest", m.to_str().unwrap()]);
    assert_eq!(code(&ok), 0, "{}", stdout(&ok));
    assert!(stdout(&ok).contains("curve.csv"));

    let csv = tmp.path().join("curve.csv");
    let mut text = fs::read_to_string(&csv).unwrap();
    text.push('\n');
    fs::write(&csv, text).unwrap();
    let bad = qrmt(&["verify", "--manifest", m.to_str().unwrap()]);
    assert_eq!(code(&bad), 4);
    assert!(stdout(&bad).contains("not ok"));

    let missing = qrmt(&["verify", "--manifest", tmp.path().join("nope.json").to_str().unwrap()]);
    assert_eq!(code(&missing), 3);
}
