use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn biset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biset")).args(args).env_remove("BISET_CACHE_DIR").output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = biset(&all);
    let v: Value = serde_json::from_slice(&out.stdout).expect("json on stdout");
    (out.status.code().unwrap(), v)
}

fn without_meta(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("meta");
    v
}

#[test]
fn basis_of_c2_c2_has_five_labels() {
    let (code, v) = json(&["basis", "C2", "C2"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["result"]["count"], 5);
    assert_eq!(v["result"]["labels"].as_array().unwrap().len(), 5);
}

#[test]
fn klein_four_does_not_generate_from_a4() {
    let (code, v) = json(&["generates", "C2xC2", "A4"]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["verdict"], "false");
    assert_eq!(v["result"]["method"], "span");
}

#[test]
fn quotient_of_a4_generates_with_one_term() {
    let (code, v) = json(&["generates", "C3", "A4"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["method"], "quotient");
    assert_eq!(v["result"]["certificate_terms"], 1);
}

#[test]
fn semisimplicity_of_c6() {
    let (code, v) = json(&["semisimple", "C6", "--char", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["semisimple"], true);
    let (code, _) = json(&["semisimple", "C6", "--char", "2"]);
    assert_eq!(code, 1);
    let (code, _) = json(&["semisimple", "S3"]);
    assert_eq!(code, 1);
}

#[test]
fn simple_functor_dimension_at_c2_cubed() {
    let (code, v) = json(&["simple-dim", "C2", "C2^3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["dimension"], 35);
    let (_, v) = json(&["simple-dim", "C2", "A4xC2"]);
    assert_eq!(v["result"]["dimension"], 14);
    assert_eq!(v["result"]["raw_classes"], 15);
}

#[test]
fn simple_dim_needs_characteristic_zero() {
    let out = biset(&["simple-dim", "C2", "C4", "--char", "2"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn burnside_module_submodule_of_c9_mod_3() {
    let (code, v) = json(&["burnside-module", "C9", "--char", "3"]);
    assert_eq!(code, 0);
    let s = &v["result"]["submodules"];
    assert_eq!(s["n_prime_invariant"], true);
    assert_eq!(s["n_prime_dim"], 1);
    assert_eq!(v["result"]["abelian_formula_agrees"], true);
}

#[test]
fn essential_quotient_matches_out() {
    for g in ["C2", "C2xC2", "S3", "D8"] {
        let (code, v) = json(&["essential-out", g]);
        assert_eq!(code, 0, "{g}");
        assert_eq!(v["result"]["agrees"], true, "{g}");
    }
}

#[test]
fn results_do_not_depend_on_threads() {
    let a = json(&["nv", "A4", "--char", "2", "--threads", "1"]);
    let b = json(&["nv", "A4", "--char", "2", "--threads", "4", "--seed", "99"]);
    assert_eq!(a.0, 1);
    assert_eq!(a.0, b.0);
    assert_eq!(without_meta(a.1), without_meta(b.1));
}

#[test]
fn cached_bases_give_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let cold = json(&["basis", "S3", "C2", "--cache-dir", d]);
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
    let warm = json(&["basis", "S3", "C2", "--cache-dir", d]);
    let none = json(&["basis", "S3", "C2"]);
    assert_eq!(cold.1["result"]["count"], 10);
    assert_eq!(without_meta(cold.1.clone()), without_meta(warm.1));
    assert_eq!(without_meta(cold.1), without_meta(none.1));
}

#[test]
fn certificate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let p = path.to_str().unwrap();
    let out = biset(&["generates", "C2", "S3", "--force-span", "--certificate-out", p]);
    assert_eq!(out.status.code(), Some(0));
    let (code, v) = json(&["verify", p]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["verified"], true);

    let mut rec: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    rec["terms"][0]["coefficient"] = Value::from("12345");
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, rec.to_string()).unwrap();
    let (code, v) = json(&["verify", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["verified"], false);
}

#[test]
fn usage_and_io_errors() {
    assert_eq!(biset(&["basis", "C2"]).status.code(), Some(3));
    assert_eq!(biset(&["basis", "C2", "Z7"]).status.code(), Some(3));
    assert_eq!(biset(&["nv", "C2", "--char", "4"]).status.code(), Some(3));
    let (code, v) = json(&["verify", "/nonexistent/cert.json"]);
    assert_eq!(code, 5);
    assert_eq!(v["error"]["kind"], "io");
    assert!(!Path::new("/nonexistent").exists());
}

#[test]
fn exhausted_budget_is_inconclusive() {
    let out = biset(&["generates", "C2xC2", "A4", "--force-span", "--max-products", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn compose_and_butterfly_cross_checks() {
    let (code, v) = json(&["compose", "C2", "C2", "C2", "3", "3", "--oracle"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["oracle_agrees"], true);
    let (code, v) = json(&["butterfly", "S3", "C2", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["factors"].as_array().unwrap().len(), 5);
}

#[test]
#[ignore = "takes about a minute in release mode"]
fn a4_times_c2_fails_nv_in_characteristic_3() {
    let (code, v) = json(&["generates", "C2^3", "A4xC2", "--char", "3"]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["verdict"], "false");
}
