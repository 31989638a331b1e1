use std::path::Path;
use std::process::{Command, Output};

const Y: &str = "[1.0471975511965976,0.6283185307179586]";

fn dseries(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dseries"))
        .args(args)
        .output()
        .expect("run dseries")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn basis_reports_bohr_non_integral() {
    let o = dseries(&["basis", "corpus:bohr:50"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["is_integral"], false);
    assert_eq!(v["witness"], 1);
}

#[test]
fn equiv_with_itself_is_zero_twist() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "f.json",
        r#"{"exponents":{"kind":"ordinary","n_max":60},"coefficients":{"kind":"builtin","name":"ones"},"tail":{"kind":"uniform","A":1}}"#,
    );
    let o = dseries(&["equiv", &spec, &spec]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["status"], "equivalent");
    assert!(v["y"]["angles"].as_array().unwrap().iter().all(|a| a.as_f64() == Some(0.0)));
}

#[test]
fn twist_then_equiv_recovers_angles() {
    let dir = tempfile::tempdir().unwrap();
    let o = dseries(&["twist", "corpus:zeta:40", "--y", "[1.0, 0.5, 2.0]"]);
    assert_eq!(o.status.code(), Some(0));
    let spec = write(dir.path(), "g.json", &stdout(&o));
    let v = json(&dseries(&["equiv", "corpus:zeta:40", &spec]));
    let angles: Vec<f64> = v["y"]["angles"].as_array().unwrap().iter().map(|a| a.as_f64().unwrap()).collect();
    for (got, want) in angles.iter().zip([1.0, 0.5, 2.0]) {
        assert!((got - want).abs() < 1e-12, "{angles:?}");
    }
}

#[test]
fn equiv_bohr_negation_is_incompatible() {
    let dir = tempfile::tempdir().unwrap();
    let mut file: serde_json::Value = serde_json::from_str(&stdout(&dseries(&["twist", "corpus:bohr:40", "--y", "[0]"]))).unwrap();
    let base = file["coefficients"].clone();
    file["coefficients"] = serde_json::json!({"kind": "scaled", "base": base, "factor": [-1.0, 0.0]});
    let neg = write(dir.path(), "neg.json", &file.to_string());
    let o = dseries(&["equiv", "corpus:bohr:40", &neg]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["status"], "incompatible");
}

#[test]
fn find_tau_on_twisted_zeta_verifies() {
    let o = dseries(&["find-tau", "corpus:zeta:500", "--y", Y, "--eps", "0.1", "--k", "1.6,2.2,-1,1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["status"], "verified");
    assert!(v["report"]["max_total"].as_f64().unwrap() < 0.1);
}

#[test]
fn identical_invocations_give_identical_bytes() {
    let args = ["find-tau", "corpus:zeta:300", "--y", Y, "--eps", "0.2", "--strategy", "lattice"];
    assert_eq!(dseries(&args).stdout, dseries(&args).stdout);
    let d = ["density", "corpus:zeta:100", "--y", Y, "--eps", "0.5", "--T", "500", "--samples", "50", "--seed", "7"];
    let (a, b) = (dseries(&d), dseries(&d));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("tau,max_error,passes\n"));
    assert_eq!(stdout(&a).lines().count(), 51);
}

#[test]
fn unsupported_strategy_and_budget_exit_codes() {
    let cf = dseries(&["find-tau", "corpus:zeta:500", "--y", Y, "--eps", "0.1", "--strategy", "continued-fraction"]);
    assert_eq!(cf.status.code(), Some(2));
    let b = dseries(&["find-tau", "corpus:zeta:500", "--y", Y, "--eps", "0.01", "--budget", "100"]);
    assert_eq!(b.status.code(), Some(3));
    let unknown = dseries(&["find-tau", "corpus:zeta:500", "--y", Y, "--eps", "0.1", "--strategy", "annealing"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"exponents":{"kind":"nope"}}"#);
    assert_eq!(dseries(&["basis", &bad]).status.code(), Some(2));
    assert_eq!(dseries(&["basis", "missing.json"]).status.code(), Some(2));
    assert_eq!(dseries(&["no-such-command"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_dseries"))
        .args(["basis", "corpus:zeta:10"])
        .env("DSERIES_PRECISION_BITS", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_bohr_translate() {
    let dir = tempfile::tempdir().unwrap();
    let mut file: serde_json::Value = serde_json::from_str(&stdout(&dseries(&["twist", "corpus:bohr:200", "--y", "[0]"]))).unwrap();
    let base = file["coefficients"].clone();
    file["coefficients"] = serde_json::json!({"kind": "scaled", "base": base, "factor": [-1.0, 0.0]});
    let neg = write(dir.path(), "neg.json", &file.to_string());
    let o = dseries(&[
        "verify", "corpus:bohr:200", &neg, "--tau", "210*pi", "--k", "2,3,-1,1", "--tail-accuracy", "1e-14", "--eps", "1e-7",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn sigma_csv_over_grid() {
    let o = dseries(&["sigma", "corpus:bohr:100", "--grid", "2.5:20.5:10", "--points", "64"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("x,terms,"));
    assert_eq!(text.lines().count(), 11);
}

#[test]
fn helly_limit_spec_is_a_twist() {
    let dir = tempfile::tempdir().unwrap();
    let taus: Vec<String> = (1..=5000).map(|m| format!("{}", m as f64 * 2f64.sqrt())).collect();
    let taus = write(dir.path(), "taus.json", &serde_json::to_string(&taus).unwrap());
    let o = dseries(&["lemma2", "corpus:smooth:100", "--taus", &taus]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert!(v["helly"]["spread"].as_f64().unwrap() < 1e-2);
    let lim = write(dir.path(), "lim.json", &v["limit_series"][0].to_string());
    assert_eq!(dseries(&["equiv", "corpus:smooth:100", &lim]).status.code(), Some(0));
}

#[test]
fn values_certifies_one_direction() {
    let dir = tempfile::tempdir().unwrap();
    let probes = write(dir.path(), "p.json", "[[1.6429, 0.0]]");
    let o = dseries(&["values", "corpus:zeta:500", "--y", Y, "--probes", &probes]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    let statuses: Vec<&str> = v["probes"].as_array().unwrap().iter().map(|p| p["status"].as_str().unwrap()).collect();
    assert_eq!(statuses.len(), 2);
    assert!(statuses.contains(&"certified"), "{statuses:?}");
}

#[test]
fn demos_succeed() {
    for s in ["bohr", "zeta", "hurwitz"] {
        let o = dseries(&["demo", s]);
        assert_eq!(o.status.code(), Some(0), "{s}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(json(&o)["ok"], true);
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = dseries(&["basis", "corpus:zeta:20", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(path).unwrap().contains("\"is_integral\": true"));
}
