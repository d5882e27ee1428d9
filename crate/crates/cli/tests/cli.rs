use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn skc(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_skc"));
    cmd.args(args).env_remove("SKC_CACHE");
    if let Some(c) = cache {
        cmd.env("SKC_CACHE", c);
    }
    cmd.output().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn lift_passes_the_maass_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lift.jsonl");
    let o = skc(&["lift", "--weight", "10", "--prec", "6", "--out", out.to_str().unwrap()], None);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 1);
    let record: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!((record["kind"].as_str(), record["weight"].as_u64()), (Some("siegel"), Some(10)));

    let reports = stdout_json(&skc(&["maass-check", "--input", out.to_str().unwrap()], None));
    assert_eq!(reports[0]["holds"], Value::Bool(true));
    assert!(reports[0]["checked"].as_u64().unwrap() >= 100);

    // The weight-10 lift is a T(2) eigenform with eigenvalue 240.
    let hecke = stdout_json(&skc(&["hecke", "--input", out.to_str().unwrap()], None));
    assert_eq!(hecke[0]["lambda2"], "240/1");
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["lift", "--weight", "11"][..],
        &["lift"],
        &["lift", "--weight", "10", "--prec", "0"],
        &["lvalue", "--weight", "18", "--s", "18"],
        &["lvalue", "--weight", "18", "--s", "10", "--format", "csv"],
        &["frobnicate"],
    ] {
        let o = skc(args, None);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err: Value = serde_json::from_str(stderr(&o).trim()).unwrap();
        assert_eq!(err["error"], "usage");
    }
}

#[test]
fn computational_failures_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.jsonl");
    std::fs::write(&input, "{\"kind\":\"siegel\"}\n").unwrap();
    let o = skc(&["maass-check", "--input", input.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(1));
    let o = skc(&["maass-check", "--input", dir.path().join("missing").to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(1));
    let err: Value = serde_json::from_str(stderr(&o).trim()).unwrap();
    assert_eq!(err["error"], "io");
}

#[test]
fn repeated_manifest_hits_the_cache_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let first = dir.path().join("a.jsonl");
    let o = skc(&["lift", "--weight", "12", "--prec", "4", "--out", first.to_str().unwrap()], Some(&cache));
    assert!(stderr(&o).contains("cache miss"), "{}", stderr(&o));
    let manifest = dir.path().join("a.jsonl.manifest.json");
    let second = dir.path().join("b.jsonl");
    let o = skc(&["run", "--manifest", manifest.to_str().unwrap(), "--out", second.to_str().unwrap()], Some(&cache));
    assert!(o.status.success() && stderr(&o).contains("cache hit"), "{}", stderr(&o));
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());

    // A poisoned entry is recomputed, not trusted, and gives the same bytes.
    let entry = std::fs::read_dir(&cache).unwrap().next().unwrap().unwrap().path();
    let text = std::fs::read_to_string(&entry).unwrap();
    std::fs::write(&entry, text.replacen("\\\"1/1\\\"", "\\\"2/1\\\"", 1)).unwrap();
    let third = dir.path().join("c.jsonl");
    let o = skc(&["run", "--manifest", manifest.to_str().unwrap(), "--out", third.to_str().unwrap()], Some(&cache));
    assert!(stderr(&o).contains("poisoned"), "{}", stderr(&o));
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&third).unwrap());
    assert_eq!(std::fs::read_to_string(&entry).unwrap(), text);
}

#[test]
fn cache_flag_overrides_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let (env, flag) = (dir.path().join("env"), dir.path().join("flag"));
    let o = skc(&["lift", "--weight", "10", "--prec", "2", "--cache", flag.to_str().unwrap()], Some(&env));
    assert!(o.status.success());
    assert!(flag.is_dir() && !env.exists());
}

#[test]
fn csv_tables_have_the_documented_columns() {
    let o = skc(&["lift", "--weight", "10", "--prec", "2", "--format", "csv"], None);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,r,m,value"));
    assert!(lines.any(|l| l == "1,1,1,1/1"));
}

#[test]
fn lvalue_report_has_a_small_error_bound() {
    let v = stdout_json(&skc(&["lvalue", "--weight", "18", "--s", "10", "--bits", "128"], None));
    assert_eq!(v["kind"], "lvalue");
    // "0x<mantissa>p<exp>": the bound is below 2^-100.
    let err = v["err"].as_str().unwrap();
    let (mant, exp) = err.trim_start_matches("0x").split_once('p').unwrap();
    let log2 = 4 * mant.len() as i64 + exp.parse::<i64>().unwrap();
    assert!(log2 < -100, "{err}");
    assert!(v["decimal"].as_str().unwrap().starts_with("4.84096"));
}

#[test]
fn congruence_report_lists_pairs_with_the_bound_qualifier() {
    let dir = tempfile::tempdir().unwrap();
    let v = stdout_json(&skc(&["congruence", "--weight", "20", "--scan-primes", "200"], Some(dir.path())));
    assert_eq!(v["pairs"].as_array().unwrap().len(), 2);
    assert_eq!(v["found"], Value::Array(vec![]));
    let low = stdout_json(&skc(
        &["congruence", "--weight", "20", "--scan-primes", "11", "--min-prime", "4"],
        Some(dir.path()),
    ));
    let found = low["found"].as_array().unwrap();
    assert_eq!(found.len(), 6);
    assert!(found.iter().all(|f| f["qualifier"] == "verified through bound 4"));
}

#[test]
fn script_l_report() {
    let v = stdout_json(&skc(&["scriptL", "--weight", "10", "--disc", "-3", "--chi", "5", "--max-prime", "60"], None));
    assert_eq!(v["pi_exponent"], -2);
    assert_eq!(v["value"], "136646657796422652903869644800/1");
}

#[test]
fn basis_and_eigen_reports() {
    let b = stdout_json(&skc(&["basis", "--weight", "20", "--prec", "3"], None));
    assert_eq!((b["dim"].as_u64(), b["cusp_dim"].as_u64(), b["non_maass_dim"].as_u64()), (Some(5), Some(3), Some(1)));
    let e = stdout_json(&skc(&["eigen", "--weight", "20", "--prec", "3"], None));
    let kinds: Vec<&str> = e.as_array().unwrap().iter().map(|x| x["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds, ["maass", "maass", "non-maass"]);
    assert_eq!(e[2]["lambda2"], "-840960/1");
}
