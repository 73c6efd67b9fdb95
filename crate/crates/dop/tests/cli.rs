use std::process::{Command, Output};

use serde_json::Value;

fn dop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dop"))
        .args(args)
        .env_remove("DOP_PREC")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_structure_suites() {
    let o = dop(&["verify", "--a", "", "--b", "1.5", "--eta", "0.7", "--K", "16", "--prec", "256", "--identities", "psi,p-shift"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rs = v.as_array().unwrap();
    assert!(!rs.is_empty());
    for r in rs {
        assert_eq!(r["pass"], Value::Bool(true));
        assert_eq!(r["K"], 16);
        assert_eq!(r["prec"], 256);
        let id = r["identity"].as_str().unwrap();
        assert!(id.starts_with("psi:") || id.starts_with("p-shift:"), "{id}");
    }
    // requested order is kept
    let first = rs.iter().position(|r| r["identity"].as_str().unwrap().starts_with("p-shift")).unwrap();
    assert!(rs[..first].iter().all(|r| r["identity"].as_str().unwrap().starts_with("psi:")));
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--a", "1.7", "--b", "2.3", "--eta", "0.4", "--K", "10", "--prec", "128", "--identities", "christoffel,geronimus,lu"];
    let (x, y) = (dop(&args), dop(&args));
    assert_eq!(x.status.code(), Some(0));
    assert_eq!(x.stdout, y.stdout);
}

#[test]
fn compute_meixner_csv() {
    let o = dop(&["compute", "--a", "2", "--b", "", "--eta", "0.4", "--nmax", "10", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("n,beta,gamma,H"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 11);
    for r in &rows {
        let n = r[0];
        // Meixner-type closed forms with a = 2, η = 0.4
        assert!((r[1] - (n + 0.4 * (n + 2.0)) / 0.6).abs() < 1e-12);
        assert!((r[2] - 0.4 * n * (n + 1.0) / 0.36).abs() < 1e-12 * (1.0 + r[2]));
    }
}

#[test]
fn divergent_weight_is_a_config_error() {
    let o = dop(&["weight", "--a", "1", "--b", "", "--eta", "1.2", "eval", "--k", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("divergent weight"));
}

#[test]
fn bad_input_exits_2() {
    assert_eq!(dop(&["verify", "--eta", "1", "--identities", "nope"]).status.code(), Some(2));
    assert_eq!(dop(&["compute", "--eta", "x"]).status.code(), Some(2));
    assert_eq!(dop(&["compute", "--b", "1", "--eta", "0.5"]).status.code(), Some(2));
    assert_eq!(dop(&["compute"]).status.code(), Some(2));
}

#[test]
fn slow_series_is_a_numeric_breakdown() {
    let o = dop(&["compute", "--a", "1", "--eta", "0.99999", "--nmax", "1", "--prec", "64"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn precision_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_dop"))
        .args(["verify", "--eta", "0.5", "--identities", "pearson"])
        .env("DOP_PREC", "128")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.as_array().unwrap().iter().all(|r| r["prec"] == 128));
}

#[test]
fn weight_diagnostics() {
    let o = dop(&["weight", "--eta", "1", "eval", "--k", "0,3", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let third: f64 = s.lines().nth(2).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((third - 1.0 / 6.0).abs() < 1e-15);
    let o = dop(&["weight", "--b", "1.5", "--eta", "0.7", "pearson", "--kmax", "50"]);
    assert_eq!(o.status.code(), Some(0));
    let o = dop(&["weight", "--a", "2", "--eta", "0.4", "theta-sigma", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.as_array().unwrap().iter().any(|r| r["poly"] == "sigma" && r["kind"] == "root" && r["value"] == "-2e0"));
}

#[test]
fn tables() {
    let o = dop(&["table", "psi", "--a", "2", "--eta", "0.4", "--nmax", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("row,col,psi\n"));
    // band: one subdiagonal and one superdiagonal for M = 1, N = 0
    for l in s.lines().skip(1) {
        let f: Vec<i64> = l.split(',').take(2).map(|x| x.parse().unwrap()).collect();
        assert!(f[1] - f[0] >= -1 && f[1] - f[0] <= 1, "{l}");
    }
    let o = dop(&["table", "moments", "--eta", "1", "--nmax", "2", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    // ρ_2 = 2e for Charlier with η = 1
    let rho2: f64 = v[2]["rho"].as_str().unwrap().parse().unwrap();
    assert!((rho2 - 2.0 * std::f64::consts::E).abs() < 1e-14);
    let o = dop(&["table", "coeffs", "--eta", "1", "--nmax", "2"]);
    assert!(stdout(&o).contains("2,2,1e0"));
}
