use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_shiftsym"))
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", &format!("{name}.dsl")]
        .iter()
        .collect();
    p.display().to_string()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_report(args: &[&str]) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let mut all: Vec<&str> = args.to_vec();
    let p = path.display().to_string();
    all.extend(["--json", &p]);
    let out = run(&all);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("{}", String::from_utf8_lossy(&out.stderr)));
    (out.status.code().unwrap(), serde_json::from_str(&text).unwrap())
}

#[test]
fn crit_embeds_a_certificate() {
    let (code, r) = json_report(&["crit", "--function", "x^3", &fixture("line")]);
    assert_eq!(code, 0);
    assert_eq!(r["verified"], true);
    assert_eq!(r["result"]["certificate"]["certified"], true);
    assert_eq!(r["result"]["certificate"]["n"], -1);
    assert_eq!(r["result"]["h0"]["total"], 2);
}

#[test]
fn closed_forms_table_for_rcrit() {
    let (code, r) = json_report(&["closed-forms", "--p", "2", "--n", "-1", "--weight-max", "8", &fixture("rcrit_x3")]);
    assert_eq!(code, 0);
    let cells = r["result"]["cells"].as_array().unwrap();
    let pi0: Vec<(u64, u64)> = cells
        .iter()
        .filter(|c| c["i"] == 0 && c["dim"].as_u64().unwrap() > 0)
        .map(|c| (c["slice"]["weight"].as_u64().unwrap(), c["dim"].as_u64().unwrap()))
        .collect();
    assert_eq!(pi0, vec![(3, 1)]);
    assert!(cells.iter().all(|c| c["certified"] == true));
}

#[test]
fn trace_report() {
    let (code, r) = json_report(&["trace", "--n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["determinant"], "-1");
    assert_eq!(r["result"]["gram_text"][1][2], "1");
}

#[test]
fn reports_are_reproducible() {
    let args = ["symplectic", "--n", "0", "--cone", "2", &fixture("plane")];
    let (_, mut a) = json_report(&args);
    let (_, mut b) = json_report(&args);
    a.as_object_mut().unwrap().remove("timing");
    b.as_object_mut().unwrap().remove("timing");
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert_eq!(a["input_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn stdin_documents() {
    let mut child = bin()
        .args(["validate", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"algebra A { gen x : degree 0, weight 1; }")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("verified: true"));
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.dsl");
    std::fs::write(&bad, "gen x: degree 0; d x = x;").unwrap();
    let out = run(&["validate", &bad.display().to_string()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1:18"));
    assert_eq!(run(&["validate", "/definitely/missing.dsl"]).status.code(), Some(2));
    assert_eq!(run(&["crit", "--function", "x +", &fixture("line")]).status.code(), Some(2));
    assert_eq!(run(&["cotangent", "--n", "1", "--strict-nonpositive", &fixture("line")]).status.code(), Some(2));
}

#[test]
fn verification_failures_exit_with_one() {
    let out = run(&["cotangent", "--n", "-1", "--golden", &fixture("odd_point")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("golden mismatch"));
    assert_eq!(run(&["symplectic", "--n", "0", "--form", "x*d x*d y", &fixture("plane")]).status.code(), Some(1));
}

#[test]
fn golden_passes_on_the_line() {
    let (code, r) = json_report(&["cotangent", "--n", "-2", "--golden", &fixture("line")]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["golden"]["matches"], true);
}

#[test]
fn truncated_runs_are_flagged() {
    let (code, r) = json_report(&["forms", "--p", "1", "--n", "0", "--truncate-degree", "3", &fixture("line")]);
    assert_eq!(code, 0);
    assert_eq!(r["mode"], "truncated(3)");
    assert_eq!(r["certified"], false);
    assert!(r["result"]["cells"].as_array().unwrap().iter().all(|c| c["certified"] == false));
}

#[test]
fn residue_and_transgression() {
    let (code, r) = json_report(&["residue", "--function", "x^2 + y^2", &fixture("plane")]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["ratio"], 1);
    let (code, r) = json_report(&["transgress", "--n", "0", &fixture("plane")]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["form"]["n"], -1);
    assert_eq!(r["result"]["tangent_ranks"]["matches"], true);
}

#[test]
fn keys_bg_loop_obstruction() {
    let (code, r) = json_report(&["keys", "--form", "x*d y", "--n", "0", &fixture("plane")]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["report"]["liftable"], false);
    let (code, r) = json_report(&["bg", "--gl", "2", "--p", "2", "--n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["closed_pi0"]["dim"], 2);
    let (code, r) = json_report(&["bg", "--dims", "1,1,1", "--p", "1", "--n", "1"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["closed_pi0"]["dim"], 1);
    let (code, r) = json_report(&["loop", &fixture("rcrit_x3")]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["presentation"]["generators"][3]["d"], "-6*x*σx");
    let (code, r) = json_report(&["obstruction", "--function", "x^2*y", &fixture("plane")]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["obstruction"]["symmetric"], true);
}

#[test]
fn input_hash_ignores_the_path() {
    use clap::Parser;
    use shiftsym_cli::{input_hash, Cli};
    let a = Cli::try_parse_from(["shiftsym", "loop", "a.dsl"]).unwrap();
    let b = Cli::try_parse_from(["shiftsym", "loop", "elsewhere/b.dsl"]).unwrap();
    let c = Cli::try_parse_from(["shiftsym", "--weight-max", "3", "loop", "a.dsl"]).unwrap();
    let src = "gen x: degree 0;";
    assert_eq!(input_hash(Some(src), &a), input_hash(Some(src), &b));
    assert_ne!(input_hash(Some(src), &a), input_hash(Some(src), &c));
    assert_ne!(input_hash(Some(src), &a), input_hash(Some("gen y: degree 0;"), &a));
}
