use std::path::Path;
use tempfile::TempDir;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_jacobi-spectra"))
}

fn scratch() -> TempDir {
    tempfile::tempdir().unwrap()
}

fn write(dir: &Path, file: &str, text: &str) -> String {
    let p = dir.join(file);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn spectrum_of_rank_one_spec() {
    let tmp = scratch();
    let d = tmp.path();
    let spec = write(d, "b0_one.json", r#"{"a": [], "b": [1.0]}"#);
    let o = run(&["spectrum", "--spec", &spec, "--radius", "0.99", "--oracle", "400"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("re_lambda,im_lambda,multiplicity,abs_z,residual,oracle_distance"));
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert!((row[0] - 1.25).abs() < 1e-10 && row[1].abs() < 1e-10 && row[2] == 1.0);
    assert!(lines.next().is_none());
}

#[test]
fn free_determinant_is_one() {
    let tmp = scratch();
    let d = tmp.path();
    let spec = write(d, "free.json", r#"{"a": [], "b": []}"#);
    let o = run(&["det", "--spec", &spec, "--engine", "volterra", "--grid", "16"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 16);
    for r in rows {
        let f: Vec<&str> = r.split(',').collect();
        assert_eq!((f[3], f[4]), ("1.0", "0.0"));
    }
}

#[test]
fn roundtrip_exit_codes() {
    let tmp = scratch();
    let d = tmp.path();
    let spec = write(d, "b03.json", r#"{"a": [0.5], "b": [0.3]}"#);
    assert_eq!(run(&["scatter", "roundtrip", "--spec", &spec, "--tol", "1e-6"]).status.code(), Some(0));
    assert_eq!(run(&["scatter", "roundtrip", "--spec", &spec, "--tol", "1e-30"]).status.code(), Some(2));
    // An eigenvalue makes the spec inadmissible for scattering.
    let bad = write(d, "b1.json", r#"{"a": [], "b": [1.0]}"#);
    assert_eq!(run(&["scatter", "roundtrip", "--spec", &bad]).status.code(), Some(1));
}

#[test]
fn forward_then_inverse_through_files() {
    let tmp = scratch();
    let d = tmp.path();
    let spec = write(d, "s.json", r#"{"a": [0.55, 0.45], "b": [0.1, -0.05]}"#);
    let data = d.join("data.json");
    let o = run(&["scatter", "forward", "--spec", &spec, "--grid-k", "12", "--data-out", data.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["scatter", "inverse", "--data", data.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&o)).unwrap();
    let want = [(0.55, 0.1), (0.45, -0.05), (0.5, 0.0)];
    for (r, (a, b)) in rows.iter().zip(want) {
        assert!((r["a"].as_f64().unwrap() - a).abs() < 1e-9);
        assert!((r["b"].as_f64().unwrap() - b).abs() < 1e-9);
    }
}

#[test]
fn malformed_spec_reports_location() {
    let tmp = scratch();
    let d = tmp.path();
    let spec = write(d, "bad.json", "{\"a\": [0.5,\n \"b\": []}");
    let o = run(&["det", "--spec", &spec]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("bad.json") && err.contains("line 2"), "{err}");
    assert_eq!(run(&["det", "--spec", "/nonexistent/spec.json"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn output_is_deterministic_and_thread_independent() {
    let tmp = scratch();
    let d = tmp.path();
    let spec = write(
        d,
        "c.json",
        r#"{"deviations": [{"n": 0, "da": [0.1, 0.2], "db": [0.4, -0.3], "dc": [0.0, 0.1]},
                           {"n": 2, "da": [0.0, 0.0], "db": [-0.6, 0.2], "dc": [0.2, 0.0]}]}"#,
    );
    let go = |threads: &str, seed: &str| {
        let o = bin()
            .env("JACOBI_SPECTRA_THREADS", threads)
            .args(["spectrum", "--spec", &spec, "--radius", "0.95", "--oracle", "300", "--seed", seed])
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        o.stdout
    };
    let one = go("1", "7");
    assert_eq!(one, go("1", "7"));
    assert_eq!(one, go("4", "7"));
    assert!(String::from_utf8(one).unwrap().lines().count() > 1);

    let o = bin().env("JACOBI_SPECTRA_THREADS", "many").args(["det", "--spec", &spec]).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn json_rows_mirror_csv() {
    let tmp = scratch();
    let d = tmp.path();
    let spec = write(d, "s.json", r#"{"a": [0.6], "b": [0.2]}"#);
    let csv = stdout(&run(&["det", "--spec", &spec, "--grid", "3"]));
    let json: Vec<serde_json::Value> = serde_json::from_str(&stdout(&run(&["det", "--spec", &spec, "--grid", "3", "--format", "json"]))).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    let header: Vec<&str> = lines[0].split(',').collect();
    assert_eq!(json.len(), lines.len() - 1);
    for (row, line) in json.iter().zip(&lines[1..]) {
        for (h, v) in header.iter().zip(line.split(',')) {
            let (j, c): (f64, f64) = (row[*h].as_f64().unwrap(), v.parse().unwrap());
            assert!((j - c).abs() <= 1e-15 * c.abs(), "{h}: {j} vs {c}");
        }
    }
    let out = d.join("t.csv");
    assert_eq!(run(&["det", "--spec", &spec, "--grid", "3", "--output", out.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(out).unwrap(), csv);
}

#[test]
fn singularities_and_metrics() {
    let tmp = scratch();
    let d = tmp.path();
    let spec = write(
        d,
        "half.json",
        r#"{"deviations": [{"n": 0, "da": [0, 0], "db": [0.35355339059327373, 0.35355339059327373], "dc": [0, 0]}]}"#,
    );
    let o = run(&["singularities", "--spec", &spec, "--grid", "1024"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 1);
    let lam: f64 = rows[0].split(',').nth(2).unwrap().parse().unwrap();
    assert!((lam - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-6);

    let o = run(&["metrics", "limit-set", "--cantor", "10"]);
    let tau: f64 = stdout(&o).lines().nth(1).unwrap().split(',').nth(3).unwrap().parse().unwrap();
    assert!((tau - 2f64.ln() / 3f64.ln()).abs() < 0.05);
    let pts = write(d, "pts.json", "[-0.5, 0.5]");
    let o = run(&["metrics", "limit-set", "--points", &pts]);
    assert!(stdout(&o).lines().nth(1).unwrap().ends_with(",0.0"));
    assert_eq!(run(&["metrics", "limit-set"]).status.code(), Some(1));
    let o = run(&["metrics", "gevrey", "--spec", &spec, "--n-max", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("quantity,argument,value\nG,0.0,"));
}

#[test]
fn pavlov_build_and_verify() {
    let tmp = scratch();
    let d = tmp.path();
    let spec = d.join("p.json");
    let spec = spec.to_str().unwrap();
    let o = run(&["pavlov", "build", "--gamma", "0.3", "--kappa", "0", "--nmax", "2000", "--out", spec]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = stdout(&o);
    assert!(rows.starts_with("k,t_k,re_lambda,im_lambda,residual\n"));
    assert_eq!(rows.lines().count(), 5);

    let o = run(&["pavlov", "verify", "--spec", spec, "--gamma", "0.3", "--kappa", "0", "--count", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().filter(|r| r["matched"] == true).count() >= 2);
    assert!(rows.iter().all(|r| r["residual"].as_f64().unwrap() < 1e-6));

    let o = run(&["pavlov", "build", "--gamma", "1.5", "--out", spec]);
    assert_eq!(o.status.code(), Some(1));
}
