use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn leibniz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leibniz")).args(args).env_remove("LEIBNIZ_SEED").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn built(dir: &TempDir, name: &str, args: &[&str]) -> String {
    let path = dir.path().join(name);
    let path_s = path.to_string_lossy().into_owned();
    let mut full = vec!["build"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--output", &path_s]);
    let out = leibniz(&full);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(Path::new(&path).exists());
    path_s
}

#[test]
fn check_valid_nilpotent_lie() {
    let dir = TempDir::new().unwrap();
    let nc = built(&dir, "nc.json", &["n-c", "--seq", "2,1"]);
    let out = leibniz(&["check", &nc]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["command"], "check");
    assert_eq!(v["passed"], true);
}

#[test]
fn check_malformed_json_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "{\n  \"basis\": [\"a\",\n");
    let out = leibniz(&["check", &bad]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["error"]["kind"], "input");
    assert!(v["error"]["message"].as_str().unwrap().contains("line"));
}

#[test]
fn check_missing_file_is_an_input_error() {
    assert_eq!(leibniz(&["check", "/nonexistent/alg.json"]).status.code(), Some(2));
}

#[test]
fn check_broken_table_reports_first_triple() {
    let dir = TempDir::new().unwrap();
    // [a,a] = a breaks the identity at (a,a,a)
    let body = r#"{"dim":1,"basis":["a"],"table":[{"i":0,"j":0,"products":[{"k":0,"num":"1","den":"1"}]}]}"#;
    let path = write(&dir, "broken.json", body);
    let out = leibniz(&["check", &path]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["passed"], false);
    assert_eq!(v["first_failure"], serde_json::json!(["a", "a", "a"]));
}

#[test]
fn build_round_trips_through_check() {
    let dir = TempDir::new().unwrap();
    for (name, args) in [
        ("rc.json", vec!["r-c", "--seq", "3,2"]),
        ("lg.json", vec!["l-general", "--seq", "3,2", "--alphas", "1,-1/2", "--betas", "0,2"]),
        ("rg.json", vec!["r-general", "--seq", "2,1"]),
        ("lp.json", vec!["l-particular", "--n1", "3", "--n2", "2", "--a2", "1", "--b2", "-3"]),
        ("rp.json", vec!["r-particular", "--n1", "2", "--n2", "1"]),
    ] {
        let path = built(&dir, name, &args);
        assert_eq!(leibniz(&["check", &path]).status.code(), Some(0), "{name}");
    }
}

#[test]
fn build_rejects_bad_parameters() {
    assert_eq!(leibniz(&["build", "l-general", "--seq", "2,1", "--alphas", "1"]).status.code(), Some(2));
    assert_eq!(leibniz(&["build", "r-particular", "--n1", "1", "--n2", "1"]).status.code(), Some(2));
    assert_eq!(leibniz(&["build", "n-c"]).status.code(), Some(2));
    assert_ne!(leibniz(&["build", "n-c", "--seq", "1,2"]).status.code(), Some(0));
}

#[test]
fn normalized_family_reports_the_change_of_basis() {
    let out = leibniz(&["build", "l-normalized", "--seq", "2,1", "--alphas", "0,1,1", "--betas", "1,0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["normalization"]["coefficient"].is_object() || v["normalization"]["coefficient"].is_string());
}

#[test]
fn cohomology_of_the_particular_solvable_algebra() {
    let dir = TempDir::new().unwrap();
    let r = built(&dir, "r.json", &["r-particular", "--n1", "2", "--n2", "1"]);
    let out = leibniz(&["cohomology", &r, "--degree", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["dim_cl"], 512);
    assert_eq!(v["dim_zl"], v["dim_bl"]);
    assert_eq!(v["dim_hl"], 0);
}

#[test]
fn cohomology_guards_exit_three() {
    let dir = TempDir::new().unwrap();
    let r = built(&dir, "r.json", &["r-particular", "--n1", "2", "--n2", "1"]);
    let out = leibniz(&["cohomology", &r, "--degree", "2", "--max-cells", "1000"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["error"]["kind"], "guard");
    assert_eq!(leibniz(&["cohomology", &r, "--degree", "4"]).status.code(), Some(3));
    assert_eq!(leibniz(&["cohomology", &r, "--degree", "1", "--max-cells", "0"]).status.code(), Some(2));
}

#[test]
fn series_derivations_and_charseq() {
    let dir = TempDir::new().unwrap();
    let nc = built(&dir, "nc.json", &["n-c", "--seq", "3,2"]);
    let s = json(&leibniz(&["series", &nc]));
    assert_eq!(s["nilpotent"], true);
    assert_eq!(s["is_lie"], true);
    let d = json(&leibniz(&["derivations", &nc, "--with-basis"]));
    assert_eq!(d["basis"].as_array().unwrap().len() as u64, d["dim_der"].as_u64().unwrap());
    let c = json(&leibniz(&["charseq", &nc]));
    assert_eq!(c["parts"], serde_json::json!([3, 2, 1]));
}

#[test]
fn identical_runs_are_byte_identical() {
    let a = leibniz(&["verify-paper", "--suite", "general", "--seq", "2,1"]);
    let b = leibniz(&["verify-paper", "--suite", "general", "--seq", "2,1"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));
    let dir = TempDir::new().unwrap();
    let nc = built(&dir, "nc.json", &["n-c", "--seq", "3,2,1"]);
    assert_eq!(leibniz(&["charseq", &nc, "--seed", "7"]).stdout, leibniz(&["charseq", &nc, "--seed", "7"]).stdout);
}

#[test]
fn seed_comes_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let nc = built(&dir, "nc.json", &["n-c", "--seq", "3,2"]);
    let env = Command::new(env!("CARGO_BIN_EXE_leibniz"))
        .args(["charseq", &nc])
        .env("LEIBNIZ_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(env.stdout, leibniz(&["charseq", &nc, "--seed", "9"]).stdout);
}

#[test]
fn general_suite_passes_and_lists_checks_in_order() {
    let v = json(&leibniz(&["verify-paper", "--suite", "general", "--seq", "2,1"]));
    let names: Vec<&str> =
        v["suites"][0]["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names.first(), Some(&"builder-identity"));
    assert_eq!(names.last(), Some(&"rigidity"));
    assert_eq!(v["passed"], true);
}

#[test]
fn particular_suite_reports_failures_with_exit_one() {
    let out = leibniz(&["verify-paper", "--suite", "particular", "--n1", "2", "--n2", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let checks = v["suites"][0]["checks"].as_array().unwrap();
    let status = |name: &str| checks.iter().find(|c| c["name"] == name).unwrap()["status"].clone();
    assert_eq!(status("rigidity"), "pass");
    assert_eq!(status("completeness"), "pass");
    assert_eq!(status("cocycle-list"), "fail");
}

#[test]
fn suite_skips_under_a_tight_guard() {
    let out = leibniz(&["verify-paper", "--suite", "general", "--seq", "2,1", "--max-cells", "1000"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    let skipped = v["suites"][0]["checks"].as_array().unwrap().iter().filter(|c| c["status"] == "skipped").count();
    assert!(skipped >= 2);
}

#[test]
fn sweep_tabulates_partitions() {
    let out = leibniz(&["sweep", "--nmax", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let p5 = v["counts"].as_array().unwrap().iter().find(|c| c["n"] == 5).unwrap()["p"].clone();
    assert_eq!(p5, "7");
    for row in v["rows"].as_array().unwrap().iter().filter(|r| r["n"].as_u64().unwrap() <= 4) {
        if row.get("hl2").is_some() {
            assert_eq!(row["hl2"], 0, "{row}");
        }
    }
}

#[test]
fn sweep_rejects_zero() {
    let out = leibniz(&["sweep", "--nmax", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn text_format_is_human_readable() {
    let out = leibniz(&["sweep", "--nmax", "3", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("p(3) = 3"));
    assert!(serde_json::from_str::<Value>(&text).is_err());
}
