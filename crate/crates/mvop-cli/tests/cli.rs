use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn mvop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mvop")).args(args).env_remove("MVOP_LOG").output().expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn hermite2(dir: &Path) -> PathBuf {
    write(dir, "w.json", r#"{"r": 2, "alpha": [1.0], "v": [0, 0, 1]}"#)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn complex_at(m: &Value, i: usize, j: usize) -> (f64, f64) {
    (m[i][j][0].as_f64().unwrap(), m[i][j][1].as_f64().unwrap())
}

#[test]
fn szego_two_by_two_d_infinity() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = hermite2(dir.path());
    let out = dir.path().join("fact.json");
    let o = mvop(&["szego", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("invariants ok"));
    let j: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let d = &j["D_infinity"];
    let want = [[2.0 / 5f64.sqrt(), 0.0], [0.0, 5f64.sqrt() / 2.0]];
    for (i, row) in want.iter().enumerate() {
        for (k, &w) in row.iter().enumerate() {
            let (re, im) = complex_at(d, i, k);
            assert!((re - w).abs() < 1e-12 && im.abs() < 1e-12, "({i},{k}) = {re}+{im}i");
        }
    }
    assert_eq!(j["ok"], Value::Bool(true));
    assert!(j["residuals"]["circle"].as_f64().unwrap() < 1e-12);
    assert!(j["coefficients"].as_object().unwrap().contains_key("0"));
}

#[test]
fn szego_scalar_is_trivial() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.json", r#"{"r": 1, "alpha": [], "v": [0, 0, 1]}"#);
    let o = mvop(&["szego", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let j: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(complex_at(&j["D_infinity"], 0, 0), (1.0, 0.0));
}

#[test]
fn malformed_and_invalid_configs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for (name, body) in [
        ("broken.json", r#"{"r": 2, "alpha": [1.0]"#),
        ("extra.json", r#"{"r": 2, "alpha": [1.0], "v": [0, 0, 1], "q": 0}"#),
        ("alpha.json", r#"{"r": 3, "alpha": [1.0], "v": [0, 0, 1]}"#),
        ("odd.json", r#"{"r": 2, "alpha": [1.0], "v": [0, 0, 0, 1]}"#),
        ("lead.json", r#"{"r": 2, "alpha": [1.0], "v": [0, 0, 2]}"#),
    ] {
        let cfg = write(dir.path(), name, body);
        for cmd in ["szego", "equilibrium"] {
            let o = mvop(&[cmd, "--config", cfg.to_str().unwrap()]);
            assert_eq!(o.status.code(), Some(2), "{cmd} {name}");
            assert!(o.stdout.is_empty());
            let err = String::from_utf8_lossy(&o.stderr);
            assert_eq!(err.lines().count(), 1, "{err}");
        }
    }
    let o = mvop(&["szego", "--config", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = hermite2(dir.path());
    let c = cfg.to_str().unwrap();
    assert_eq!(mvop(&["direct", "--config", c, "--N", "4"]).status.code(), Some(2));
    assert_eq!(mvop(&["direct", "--N", "4", "--nmax", "3"]).status.code(), Some(2));
    assert_eq!(mvop(&["compare", "--config", c, "--N-list", "8,16", "--nmax", "10"]).status.code(), Some(2));
    assert_eq!(mvop(&["equilibrium", "--config", c, "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(mvop(&["szego", "--config", c, "--format", "csv"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_mvop"))
        .args(["equilibrium", "--config", c])
        .env("MVOP_LOG", "verbose")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn computation_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "two.json", r#"{"r": 1, "alpha": [], "v": [0, 0, -3, 0, 1]}"#);
    let o = mvop(&["equilibrium", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("not regular"));
}

#[test]
fn equilibrium_quadratic_endpoints() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = hermite2(dir.path());
    let o = mvop(&["equilibrium", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let j: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((j["a"].as_f64().unwrap() + std::f64::consts::SQRT_2).abs() < 1e-12);
    assert!((j["b"].as_f64().unwrap() - std::f64::consts::SQRT_2).abs() < 1e-12);
    assert!((j["h_coeffs"][0].as_f64().unwrap() - 4.0).abs() < 1e-12);
    assert!((j["ell"].as_f64().unwrap() - (-1.0 - 2.0 * 2f64.ln())).abs() < 1e-11);
    for k in ["c", "d", "residuals"] {
        assert!(j.get(k).is_some(), "{k}");
    }
}

#[test]
fn equilibrium_csv_from_extension() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = hermite2(dir.path());
    let out = dir.path().join("eq.csv");
    let o = mvop(&["equilibrium", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let (header, rows) = csv_rows(&std::fs::read_to_string(out).unwrap());
    assert_eq!(header[..2], ["a", "b"]);
    assert!((rows[0][1] - 2f64.sqrt()).abs() < 1e-14);
}

#[test]
fn direct_family_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = hermite2(dir.path());
    let out = dir.path().join("fam.csv");
    let o = mvop(&[
        "direct",
        "--config",
        cfg.to_str().unwrap(),
        "--N",
        "16",
        "--nmax",
        "20",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = csv_rows(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(header.len(), 1 + 3 * 8 + 1);
    assert_eq!(header[0], "n");
    assert_eq!(header.last().unwrap(), "orth_residual");
    assert_eq!(rows.len(), 20);
    for (k, row) in rows.iter().enumerate() {
        assert_eq!(row[0], k as f64);
        assert!(row[25] < 1e-8, "n={k}: {}", row[25]);
        // H is Hermitian positive: real positive diagonal
        assert!(row[17] > 0.0 && row[23] > 0.0);
    }
}

#[test]
fn direct_is_thread_count_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "q.json", r#"{"r": 3, "alpha": [0.7, -0.4], "v": [0, 0.3, 0.5, 0, 1]}"#);
    let c = cfg.to_str().unwrap();
    let one = mvop(&["direct", "--config", c, "--N", "12", "--nmax", "14", "--threads", "1"]);
    let four = mvop(&["direct", "--config", c, "--N", "12", "--nmax", "14", "--threads", "4"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn compare_report_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = hermite2(dir.path());
    let out = dir.path().join("report.json");
    let o = mvop(&[
        "compare",
        "--config",
        cfg.to_str().unwrap(),
        "--N-list",
        "8,16,32",
        "--nmax",
        "auto",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let j: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let rows = j["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2]["N"], 32);
    for key in ["b_err", "c_err", "h_err", "outer_err", "inner_err", "edge_err"] {
        assert!(rows.iter().all(|r| r[key].as_f64().unwrap().is_finite()), "{key}");
    }
    let s = &j["slopes"];
    assert!(s["h"].as_f64().unwrap() < -1.6);
    assert!(s["h_leading"].as_f64().unwrap() < -0.8);
    assert!(s["outer"].as_f64().unwrap() < -0.8);
    assert!(s["inner"].as_f64().unwrap() < -0.8);
    assert!(s.get("edge").is_some());
}

#[test]
fn detgrid_within_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = hermite2(dir.path());
    let out = dir.path().join("grid.csv");
    let o = mvop(&[
        "detgrid",
        "--config",
        cfg.to_str().unwrap(),
        "--N",
        "10",
        "--points",
        "2000",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = csv_rows(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(header, ["x", "det"]);
    assert_eq!(rows.len(), 2000);
    // effective entry for v = x^2 is sqrt(2) * alpha
    let a2 = 2.0;
    for row in &rows {
        let (x, d) = (row[0], row[1]);
        assert!(x > -1.0 && x < 1.0);
        let lo = a2 * (x * x - 1.0) / (4.0 + a2);
        let hi = (4.0 + a2 * x * x) / (4.0 + a2);
        assert!(d >= lo - 1e-12 && d <= hi + 1e-12, "x={x}: {d} not in [{lo}, {hi}]");
    }
}

#[test]
fn detgrid_direct_alpha_value_at_origin() {
    let o = mvop(&["detgrid", "--alpha", "1", "--N", "6", "--points", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let (_, rows) = csv_rows(&stdout(&o));
    // x = 0, cos 2ψ = cos(−6π) = 1
    assert_eq!(rows[0][0], 0.0);
    assert!((rows[0][1] - 0.8).abs() < 1e-12, "{}", rows[0][1]);
    let cfg_dir = tempfile::tempdir().unwrap();
    let quartic = write(cfg_dir.path(), "q.json", r#"{"r": 2, "alpha": [1.0], "v": [0, 0, 0, 0, 1]}"#);
    assert_eq!(mvop(&["detgrid", "--config", quartic.to_str().unwrap(), "--N", "6"]).status.code(), Some(2));
}
