use std::process::{Command, Output};

use serde_json::Value;

fn sakai(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sakai")).args(args).env_remove("SAKAI_PRECISION").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn lattice_verify_reports_translation_vectors() {
    let out = sakai(&["lattice-verify"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"], "lattice-verify");
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
    let vectors: Vec<&Value> = v["results"]["translation_vectors"].as_array().unwrap().iter().map(|t| &t["vector"]).collect();
    assert!(vectors.contains(&&serde_json::json!([1, -1, 0])));
    assert!(vectors.contains(&&serde_json::json!([0, 1, -1])));
}

#[test]
fn zero_trials_is_a_usage_error() {
    let out = sakai(&["weyl-verify", "--trials", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!json(&out)["failures"].as_array().unwrap().is_empty());
}

#[test]
fn decimals_are_rejected_where_exact_input_is_required() {
    let out = sakai(&["basepoints-verify", "--lambda", "0.5", "--s", "1", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = sakai(&["orbit", "--lambda", "1", "--s", "0", "--n", "1", "--x", "1e0", "--y", "2", "--steps", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_precision_and_tolerance() {
    let base = ["op-run", "--lambda", "1", "--s", "0", "--n-max", "3"];
    let out = sakai(&[&base[..], &["--precision", "32"]].concat());
    assert_eq!(out.status.code(), Some(2));
    let out = sakai(&[&base[..], &["--tolerance", "-1e-5"]].concat());
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_sakai")).args(base).env("SAKAI_PRECISION", "16").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = sakai(&["op-run", "--lambda", "1", "--s", "0", "--n-max", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn theorem1_and_weyl_pass_and_are_deterministic() {
    for cmd in ["theorem1-verify", "weyl-verify"] {
        let a = sakai(&[cmd, "--trials", "12", "--seed", "11"]);
        let b = sakai(&[cmd, "--trials", "12", "--seed", "11"]);
        assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
        assert_eq!(a.stdout, b.stdout, "{cmd} output differs between runs");
    }
}

#[test]
fn basepoints_pass_for_generic_parameters() {
    let out = sakai(&["basepoints-verify", "--lambda", "1/2", "--s", "1", "--n", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("check,pass,detail\n"));
    assert!(!text.contains(",false,"));
    let out = sakai(&["basepoints-verify", "--lambda", "0", "--s", "1", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn op_run_fails_only_on_the_e2_identity() {
    let args = ["op-run", "--lambda", "1/2", "--s", "1", "--n-max", "5", "--precision", "192", "--tolerance", "1e-30"];
    let out = sakai(&args);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let failures = v["failures"].as_array().unwrap();
    assert_eq!(failures.len(), 1, "{failures:?}");
    assert!(failures[0].as_str().unwrap().starts_with("e2"));
    assert_eq!(v["results"]["beta_positive"], true);
    assert_eq!(v["config"]["precision"], 192);

    let again = sakai(&args);
    assert_eq!(out.stdout, again.stdout);

    let csv = sakai(&[&args[..], &["--format", "csv"]].concat());
    let text = String::from_utf8(csv.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), "n,alpha,beta,R,r,x,y,xt,yt,e2,e4,g1,g2,r1bv,r2bv,d1,d2");
    assert_eq!(text.lines().count(), 7);
}

#[test]
fn orbit_writes_atomically_to_out() {
    let dir = std::env::temp_dir().join(format!("sakai-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("orbit.csv");
    let out = sakai(&[
        "orbit", "--lambda", "1", "--s", "0", "--n", "1", "--x", "1", "--y", "2", "--steps", "2", "--format", "csv",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "n,x,y,q,p");
    assert_eq!(rows[2], "2,-1/12,69,23/4*sqrt(2),134/23*sqrt(2)");
    assert_eq!(std::fs::read_dir(&dir).unwrap().count(), 1, "no temporary files left behind");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn orbit_reports_singular_start() {
    let out = sakai(&["orbit", "--lambda", "1", "--s", "0", "--n", "1", "--x", "0", "--y", "2", "--steps", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["failures"][0]["error"].as_str().unwrap().contains("singular"));
}
