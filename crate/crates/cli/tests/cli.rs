use std::process::Command;

use serde_json::Value;

fn hciz(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hciz"))
        .args(args)
        .env_remove("HCIZ_CACHE_DIR")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = hciz(args);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn lis_prints_exact_fractions() {
    let v = json(&["lis", "--d", "3", "--N", "2"]);
    assert_eq!(v[0]["probability"], "5/6");
}

#[test]
fn expand_reports_string_coefficients() {
    let v = json(&["expand", "--kind", "hciz", "--N", "2", "--D", "2"]);
    let row = v
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["alpha"] == serde_json::json!([2]) && r["beta"] == serde_json::json!([2]))
        .unwrap();
    assert_eq!(row["value"], "2/3");
    assert_eq!(row["d"], 2);
}

#[test]
fn char_table_csv() {
    let (code, out, _) = hciz(&["char", "--d", "2", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out, "lambda,alpha,class_size,chi\n[2],[2],1,1\n[2],\"[1,1]\",1,1\n\"[1,1]\",[2],1,-1\n\"[1,1]\",\"[1,1]\",1,1\n");
}

#[test]
fn eval_agrees_with_character_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spec.json");
    std::fs::write(&path, r#"{"a": ["1/2", "1/3i"], "b": ["1", "-1/2+1/2i"]}"#).unwrap();
    for kind in ["hciz", "bgw"] {
        let v = json(&["eval", "--kind", kind, "--z", "1/10", "--spectrum", path.to_str().unwrap(), "--D", "4"]);
        assert_eq!(v["character_path_agrees"], true);
        assert_eq!(v["per_degree_terms"].as_array().unwrap().len(), 5);
        assert_eq!(v["per_degree_terms"][0]["re"], "1/1");
    }
}

#[test]
fn rerun_is_byte_identical() {
    let args = ["mc", "--kind", "hciz", "--N", "2", "--z", "1/10", "--samples", "2000", "--seed", "3"];
    let (_, first, _) = hciz(&args);
    let (_, second, _) = hciz(&args);
    assert_eq!(first, second);
    let v: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["samples"], 2000);
    assert_eq!(v["within_4_sigma"], true);
}

#[test]
fn mc_rejects_small_sample_counts() {
    let (code, _, err) = hciz(&["mc", "--kind", "bgw", "--N", "2", "--z", "1/10", "--samples", "10"]);
    assert_eq!(code, 2);
    assert!(err.contains("1000"), "{err}");
}

#[test]
fn degree_guard() {
    let (code, _, err) = hciz(&["expand", "--kind", "hciz", "--N", "2", "--D", "7"]);
    assert_eq!(code, 2);
    assert!(err.contains("d_max"), "{err}");
}

#[test]
fn config_file_and_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("out.csv");
    std::fs::write(&cfg, "format=csv\nd_max=4\nD=4\n").unwrap();
    let (code, _, err) = hciz(&["--config", cfg.to_str().unwrap(), "--output", out.to_str().unwrap(), "hurwitz", "--d", "2", "--genus", "0"]);
    assert_eq!(code, 0, "{err}");
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("alpha,beta,genus,hurwitz\n"));
}

#[test]
fn verify_exact_passes() {
    let (code, out, err) = hciz(&["verify", "exact"]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 6);
    assert!(err.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn delta_decay_ratio_near_quarter() {
    let v = json(&["delta", "--kind", "hciz", "--k", "1", "--N", "8,16,32", "--D", "2"]);
    let rows = v.as_array().unwrap();
    let last = rows.iter().rev().find(|r| !r["ratio"].is_null()).unwrap();
    let ratio = last["ratio"].as_f64().unwrap();
    assert!((ratio - 0.25).abs() < 0.02, "{ratio}");
}

#[test]
fn cache_directory_is_populated() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_hciz"))
        .args(["partitions", "--d", "3", "--d-max", "7"])
        .env("HCIZ_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("character_table_7.json").exists());
}
