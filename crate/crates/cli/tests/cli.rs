use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn moufang(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_moufang")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = moufang(&all);
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stderr)));
    (out.status.code().unwrap(), v)
}

fn section<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["sections"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["name"] == name)
        .unwrap_or_else(|| panic!("no section {name}"))
}

/// Removes timing fields so reports can be compared byte for byte.
fn strip_timings(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.retain(|k, _| !k.ends_with("_ms"));
            map.values_mut().for_each(strip_timings);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timings),
        _ => {}
    }
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("moufang-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn build_poly_reports_order() {
    let (code, r) = json(&["build", "poly"]);
    assert_eq!(code, 0);
    assert_eq!(r["schema"], "moufang.report/1");
    assert_eq!(r["order"], 177147);
    assert_eq!(r["loop"], "poly");
    assert!(r["version"].is_string());
}

#[test]
fn unsupported_rank_is_an_error() {
    let out = moufang(&["build", "burnside:5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not supported"));
}

#[test]
fn unknown_loop_is_rejected() {
    let out = moufang(&["build", "octonions"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_poly_is_symbolic_and_passes() {
    let (code, r) = json(&["verify", "poly"]);
    assert_eq!(code, 0);
    let m = section(&r, "moufang");
    assert_eq!(m["data"]["method"], "symbolic");
    assert_eq!(m["data"]["result"]["verdict"], "PASS");
    assert_eq!(section(&r, "[[x,y],z] = 1")["passed"], true);
    assert_eq!(section(&r, "exponent 3")["passed"], true);
}

#[test]
fn verify_poly_mutant_fails_with_nonzero_exit() {
    let (code, r) = json(&["verify", "poly-mutant"]);
    assert_eq!(code, 1);
    assert_eq!(r["passed"], false);
    let m = section(&r, "moufang");
    assert_eq!(m["data"]["result"]["verdict"], "FAIL");
    assert_eq!(m["data"]["result"]["component"], 11);
}

#[test]
fn verify_corrupted_fixtures_fail() {
    assert_eq!(moufang(&["verify", "nonmoufang5"]).status.code(), Some(1));
    let (code, r) = json(&["verify", "burnside-mutant"]);
    assert_eq!(code, 1);
    assert_eq!(section(&r, "pcp consistency")["passed"], false);
}

#[test]
fn verify_small_triplication_passes() {
    let (code, r) = json(&["verify", "tri:burnside:2", "--samples", "20000"]);
    assert_eq!(code, 0, "{r:#}");
    assert_eq!(r["order"], 81);
    assert_eq!(section(&r, "moufang")["data"]["method"], "exhaustive");
    assert_eq!(section(&r, "rho central")["passed"], true);
}

#[test]
fn reports_are_deterministic_modulo_timings() {
    let args = ["verify", "tri:abelian:2", "--samples", "5000", "--seed", "17"];
    let (_, mut a) = json(&args);
    let (_, mut b) = json(&args);
    strip_timings(&mut a);
    strip_timings(&mut b);
    assert_eq!(a, b);
    assert_eq!(a["seed"], 17);
}

#[test]
fn text_format_has_one_line_per_section() {
    let out = moufang(&["verify", "abelian:2", "--samples", "1000"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("PASS  moufang")));
    assert!(text.ends_with("overall: PASS\n"));
}

#[test]
fn export_table_small_triplication() {
    let path = scratch("m81.csv");
    let p = path.to_str().unwrap();
    assert!(moufang(&["export-table", "tri:burnside:2", "--out", p]).status.success());
    let first = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = first.lines().collect();
    assert_eq!(lines[0], "order=81");
    assert_eq!(lines.len(), 82);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 81));
    assert!(moufang(&["export-table", "tri:burnside:2", "--out", p]).status.success());
    assert_eq!(first, std::fs::read_to_string(&path).unwrap());
}

#[test]
fn export_table_burnside_three() {
    let out = moufang(&["export-table", "burnside:3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("order=2187"));
    assert_eq!(text.lines().count(), 2188);
}

#[test]
fn export_poly_is_too_large() {
    let out = moufang(&["export-table", "poly"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("too large"));
}

#[test]
fn normality_of_n_with_expectations() {
    let args = ["normality", "poly", "--subloop", "span:5,6,7,11"];
    let (code, r) = json(&[&args[..], &["--expect", "normal"]].concat());
    assert_eq!(code, 0);
    let n = section(&r, "normality");
    assert_eq!(n["data"]["normal"], true);
    assert_eq!(n["data"]["method"], "symbolic");
    assert_eq!(section(&r, "quotient")["data"]["order"], 2187);
    assert_eq!(section(&r, "quotient")["data"]["commutative"], true);
    let (code, _) = json(&[&args[..], &["--expect", "not-normal"]].concat());
    assert_eq!(code, 1);
}

#[test]
fn center_of_poly_is_not_normal_with_certificate() {
    let (code, r) = json(&["normality", "poly", "--subloop", "center", "--expect", "not-normal"]);
    assert_eq!(code, 0);
    let d = &section(&r, "normality")["data"];
    assert_eq!(d["certificate_verified"], true);
    let c = &d["certificate"];
    assert_eq!(c["schema"], "moufang.certificate/1");
    assert_eq!(c["kind"], "R");
    assert_eq!(c["x"], "(0,1,0,0,0,0,0,0,0,0,0)");
    assert_eq!(c["image"], "(1,0,0,0,0,0,0,1,0,0,0)");
    assert_eq!(c["witness"], "(0,0,0,1,0,0,0,0,0,0,0)");
}

#[test]
fn invariants_of_poly() {
    let (code, r) = json(&["invariants", "poly"]);
    assert_eq!(code, 0);
    let basis = |name: &str| section(&r, name)["data"]["basis"].clone();
    assert_eq!(basis("commutative center"), serde_json::json!(["e1", "e5", "e6", "e7", "e11"]));
    assert_eq!(basis("nucleus"), serde_json::json!(["e8", "e9", "e10", "e11"]));
    assert_eq!(basis("center"), serde_json::json!(["e11"]));
    assert_eq!(section(&r, "exponent")["data"]["exponent"], 3);
}

#[test]
fn center_command_checks_associativity() {
    let (code, r) = json(&["center", "poly"]);
    assert_eq!(code, 0);
    let a = &section(&r, "commutative center associativity")["data"];
    assert_eq!(a["associative"], true);
    assert_eq!(a["triples"], 14_348_907u64);
}

#[test]
fn witness_for_poly_structure_constants() {
    let (code, r) = json(&["witness", "poly"]);
    assert_eq!(code, 0);
    let rows = section(&r, "structure constants (a,b,c,d = e1..e4)")["data"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 7);
    assert!(rows.iter().all(|row| row["value"] == row["expected"]));
}

#[test]
fn witness_for_triplication_of_b33() {
    let (code, r) = json(&["witness", "tri:burnside:3", "--threads", "1"]);
    assert_eq!(code, 0);
    let d = &section(&r, "non-normal commutative center")["data"];
    assert_eq!(d["center_order"], 9);
    assert_eq!(d["certificate_verified"], true);
    assert_eq!(d["certificate"]["n"], "2:1");
}

#[test]
fn full_suite_is_all_green() {
    let path = scratch("suite.json");
    let out = moufang(&["reproduce-paper", "--format", "json", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let sections = r["sections"].as_array().unwrap();
    assert_eq!(sections.len(), 12);
    assert!(sections.iter().all(|s| s["passed"] == true), "{r:#}");
    assert!(r["total_ms"].as_f64().unwrap() > 0.0);
    assert_eq!(r["seed"], 0x4d6f_7566_616e_6733u64);
}
