use std::process::Command;

use serde_json::Value;

fn cpalg(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cpalg")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = cpalg(args);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn temp_file(name: &str, body: &str) -> String {
    let path = std::env::temp_dir().join(format!("cpalg-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn tower_ranks() {
    let v = json(&["tower", "--r1", "4", "--p", "2", "--depth", "5"]);
    assert_eq!(v["result"], "tower-bounds");
    assert_eq!(v["rank_bounds"], serde_json::json!([4, 6, 15, 105, 5460]));
    assert_eq!(v["log_exponent_bounds"], serde_json::json!([null, 3, 5, 14, 104]));
    assert_eq!(v["exponent_bounds"][4], "20282409603651670423947251286016");
}

#[test]
fn hyperbolic_form_diagonalizes() {
    let v = json(&["form", "diagonalize", "--hyperbolic", "3"]);
    assert_eq!(v["result"], "diagonalization");
    let d = &v["diagonalization"]["diagonal"];
    assert_eq!(d.as_array().unwrap().len(), 2);
    assert!(d.as_array().unwrap().iter().all(|x| x.as_str().unwrap().ends_with("/3")));
}

#[test]
fn trilinear_classification_has_two_tables() {
    let v = json(&["ring", "classify-trilinear"]);
    assert_eq!(v["result"], "trilinear-classification");
    assert_eq!(v["classes"].as_array().unwrap().len(), 2);
}

#[test]
fn reports_are_byte_identical_across_worker_counts() {
    let a = cpalg(&["module", "random", "--p", "3", "--count", "9", "--seed", "11", "--jobs", "1"]);
    let b = cpalg(&["module", "random", "--p", "3", "--count", "9", "--seed", "11", "--jobs", "4"]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    let v: Value = serde_json::from_str(&a.1).unwrap();
    assert_eq!(v["herbrand_all"], true);
    let c = cpalg(&["module", "random", "--p", "3", "--count", "9", "--seed", "12"]);
    assert_ne!(a.1, c.1);
}

#[test]
fn module_literal_round_trip() {
    let path = temp_file("mod.json", r#"{"p": 2, "exponents": [3], "zeta": [[-1]]}"#);
    let v = json(&["module", "classify", "--input", &path]);
    assert_eq!(v["tate"]["h_odd"], 1);
    let out = temp_file("out.json", "");
    let (code, table, _) = cpalg(&["module", "tate", "--input", &path, "--output", &out]);
    assert_eq!(code, 0);
    assert!(table.contains("tate.h_even"));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(written["result"], "tate");
}

#[test]
fn exact_sequence_on_named_group() {
    let v = json(&["cohom", "exact-sequence", "--group", "Q8"]);
    assert_eq!(v["exact"], true);
    assert_eq!(v["subgroups"].as_array().unwrap().len(), 3);
    let v = json(&["cohom", "betti", "--group", "C4xC2", "--max-degree", "3"]);
    assert_eq!(v["table"]["dims"], serde_json::json!([1, 2, 3, 4]));
}

#[test]
fn built_covering_model_verifies() {
    let v = json(&["covering", "build", "--kind", "shrinking", "--p", "3", "--blocks", "2:1", "--param", "0"]);
    assert_eq!(v["identities"]["passed"], true);
    assert_eq!(v["verdict"]["passed"], true);
}

#[test]
fn exit_codes() {
    let bad = temp_file("bad.json", "{\"p\": 2,");
    let (code, _, err) = cpalg(&["module", "tate", "--input", &bad]);
    assert_eq!(code, 2);
    assert!(err.contains("line 1"));
    let (code, _, _) = cpalg(&["module", "tate"]);
    assert_eq!(code, 2);
    let (code, _, _) = cpalg(&["tower", "--r1", "3", "--p", "2", "--depth", "2"]);
    assert_eq!(code, 2);
    let (code, _, _) = cpalg(&["ring", "covers", "--n-max", "12"]);
    assert_eq!(code, 3);
    let (code, _, _) = cpalg(&["cohom", "betti", "--group", "D32", "--bar", "--max-degree", "5"]);
    assert_eq!(code, 3);
}
