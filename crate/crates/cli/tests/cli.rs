use std::path::Path;
use std::process::Command;

use serde_json::Value;
use taufn_cli::run;

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn taufn(args: &[&str]) -> taufn_cli::Outcome {
    run(std::iter::once("taufn").chain(args.iter().copied()))
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

/// `1 + Q_(3,2,1)(x/2)` at truncation 8.
fn bad_bkp(dir: &Path) -> String {
    let q = taufn(&["schurq", "--partition", "3,2,1", "--half"]);
    assert_eq!(q.code, 0);
    let mut doc = json(&q.stdout);
    doc["truncation_weight"] = 8.into();
    doc["terms"]
        .as_array_mut()
        .unwrap()
        .insert(0, serde_json::json!({"exps": {}, "coeff": "1"}));
    write(dir, "bad.json", &doc.to_string())
}

#[test]
fn schur_21() {
    let out = taufn(&["schur", "--partition", "2,1"]);
    assert_eq!(out.code, 0);
    assert_eq!(
        json(&out.stdout),
        json(
            r#"{"kind":"kp","truncation_weight":3,"terms":[
            {"exps":{"3":1},"coeff":"-1"},{"exps":{"1":3},"coeff":"1/3"}]}"#
        )
    );
}

#[test]
fn synthesized_hook_passes_three_term() {
    let dir = tempfile::tempdir().unwrap();
    let seed = write(
        dir.path(),
        "seed.json",
        r#"{"hooks":[{"arm":0,"leg":0,"value":"1"}]}"#,
    );
    let out = taufn(&[
        "synth",
        "--hierarchy",
        "kp",
        "--seed-table",
        &seed,
        "--max-weight",
        "8",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let doc = json(&out.stdout);
    assert_eq!(doc["table"]["basis"], "schur");
    let tau = write(dir.path(), "tau.json", &doc["tau"].to_string());
    let out = taufn(&[
        "check",
        "--hierarchy",
        "kp",
        "--identity",
        "three-term",
        "--mode",
        "graded",
        "--tau",
        &tau,
    ]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let report = json(&out.stdout);
    assert_eq!(report["pass"], true);
    assert_eq!(report["guaranteed_weight"], 8);
    assert!(report.get("elapsed_ms").is_none());
    assert!(report.get("convention").is_none());
}

#[test]
fn bad_bkp_fails_hirota_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let bad = bad_bkp(dir.path());
    let out = taufn(&[
        "check",
        "--hierarchy",
        "bkp",
        "--identity",
        "hirota",
        "--tau",
        &bad,
    ]);
    assert_eq!(out.code, 1);
    let report = json(&out.stdout);
    assert_eq!(report["pass"], false);
    assert_eq!(report["convention"], "eq73-normalized");
    let first = &report["failures"][0];
    assert!(!first["monomial"].as_str().unwrap().is_empty());
    assert_eq!(first["weight"], 6);

    let out = taufn(&[
        "check",
        "--hierarchy",
        "bkp",
        "--identity",
        "giambelli",
        "--tau",
        &bad,
    ]);
    assert_eq!(out.code, 1);
    assert_eq!(json(&out.stdout)["failures"][0]["monomial"], "(3,2,1)");
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = bad_bkp(dir.path());
    let even = write(
        dir.path(),
        "even.json",
        r#"{"kind":"bkp","truncation_weight":4,"terms":[{"exps":{"2":1},"coeff":"1"}]}"#,
    );
    let garbage = write(dir.path(), "garbage.json", "{");
    let unnormalized = write(
        dir.path(),
        "t.json",
        r#"{"basis":"schur","max_weight":2,"entries":[{"partition":[],"value":"2"}]}"#,
    );
    for args in [
        vec![
            "check",
            "--hierarchy",
            "bkp",
            "--identity",
            "three-term",
            "--tau",
            &bad,
        ],
        vec![
            "check",
            "--hierarchy",
            "kp",
            "--identity",
            "four-term",
            "--tau",
            &bad,
        ],
        vec![
            "check",
            "--hierarchy",
            "kp",
            "--identity",
            "hirota",
            "--tau",
            &bad,
        ],
        vec![
            "check",
            "--hierarchy",
            "bkp",
            "--identity",
            "hirota",
            "--mode",
            "exact",
            "--tau",
            &bad,
        ],
        vec![
            "check",
            "--hierarchy",
            "bkp",
            "--identity",
            "giambelli",
            "--mode",
            "exact",
            "--tau",
            &bad,
        ],
        vec![
            "check",
            "--hierarchy",
            "bkp",
            "--identity",
            "four-term",
            "--tau",
            &even,
        ],
        vec![
            "check",
            "--hierarchy",
            "bkp",
            "--identity",
            "four-term",
            "--tau",
            &garbage,
        ],
        vec![
            "check",
            "--hierarchy",
            "bkp",
            "--identity",
            "four-term",
            "--tau",
            "/nonexistent.json",
        ],
        vec![
            "check",
            "--hierarchy",
            "kp",
            "--identity",
            "giambelli",
            "--table",
            &unnormalized,
        ],
        vec![
            "check",
            "--hierarchy",
            "bkp",
            "--identity",
            "pfaffian-addition",
            "--order",
            "9",
            "--tau",
            &bad,
        ],
        vec!["schur", "--partition", "1,2"],
        vec!["schurq", "--partition", "2,2"],
        vec!["schur", "--partition", "-1"],
        vec!["selftest", "--max-weight", "2"],
        vec!["frobnicate"],
    ] {
        let out = taufn(&args);
        assert_eq!(out.code, 2, "{args:?}: {}", out.stdout);
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn expand_and_table_check() {
    let dir = tempfile::tempdir().unwrap();
    let bad = bad_bkp(dir.path());
    let out = taufn(&["expand", "--hierarchy", "bkp", "--tau", &bad]);
    assert_eq!(out.code, 0);
    let table = json(&out.stdout);
    assert_eq!(table["basis"], "schur-q");
    assert_eq!(table["entries"].as_array().unwrap().len(), 2);
    let path = write(dir.path(), "table.json", &out.stdout);
    let out = taufn(&[
        "check",
        "--hierarchy",
        "bkp",
        "--identity",
        "giambelli",
        "--table",
        &path,
    ]);
    assert_eq!(out.code, 1);
    // Below the weight of (3,2,1) the table is consistent.
    let out = taufn(&[
        "check",
        "--hierarchy",
        "bkp",
        "--identity",
        "giambelli",
        "--table",
        &path,
        "--max-weight",
        "5",
    ]);
    assert_eq!(out.code, 0);
}

#[test]
fn exact_mode_reports_samples_and_is_seed_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let bad = bad_bkp(dir.path());
    let args = |seed: &'static str| {
        vec![
            "check",
            "--hierarchy",
            "bkp",
            "--identity",
            "four-term",
            "--mode",
            "exact",
            "--rng-seed",
            seed,
            "--tau",
            bad.as_str(),
        ]
        .into_iter()
        .map(String::from)
        .collect::<Vec<_>>()
    };
    let run_with = |a: Vec<String>| run(std::iter::once("taufn".to_string()).chain(a));
    let a = run_with(args("7"));
    let b = run_with(args("7"));
    let c = run_with(args("8"));
    assert_eq!(a.code, 1);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let samples = &json(&a.stdout)["parameters"]["samples"];
    assert_eq!(samples.as_array().unwrap().len(), 5);
}

#[test]
fn out_flag_and_binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = bad_bkp(dir.path());
    let out_path = dir.path().join("report.json");
    let bin = env!("CARGO_BIN_EXE_taufn");
    let status = Command::new(bin)
        .args([
            "check",
            "--hierarchy",
            "bkp",
            "--identity",
            "hirota",
            "--tau",
            &bad,
            "--out",
        ])
        .arg(&out_path)
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));
    assert!(status.stdout.is_empty());
    let written = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(json(&written)["pass"], false);

    let first = Command::new(bin)
        .args(["schurq", "--partition", "4,1"])
        .output()
        .unwrap();
    let second = Command::new(bin)
        .args(["schurq", "--partition", "4,1"])
        .output()
        .unwrap();
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let usage = Command::new(bin).args(["check"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn timing_adds_elapsed() {
    let dir = tempfile::tempdir().unwrap();
    let bad = bad_bkp(dir.path());
    let out = taufn(&[
        "--timing",
        "check",
        "--hierarchy",
        "bkp",
        "--identity",
        "hirota",
        "--tau",
        &bad,
    ]);
    assert!(json(&out.stdout)["elapsed_ms"].is_u64());
}

#[test]
fn selftest_passes_and_is_reproducible() {
    let a = taufn(&["selftest", "--max-weight", "8"]);
    assert_eq!(a.code, 0, "{}", a.stdout);
    let b = taufn(&["selftest", "--max-weight", "8"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a.stdout)["criteria"].as_array().unwrap().len(), 8);
}
