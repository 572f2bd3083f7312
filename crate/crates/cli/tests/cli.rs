use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dihedral-forge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = run(args);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["decompose", "--n", "7"]).status.code(), Some(1));
    assert_eq!(
        run(&["decompose", "--n", "8", "--q", "3"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["decompose", "--n", "9", "--q", "3"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["decompose", "--n", "7", "--q", "6"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["bounds", "--n", "7", "--q", "2", "--delta", "0.7"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&[
            "--threads",
            "0",
            "bounds",
            "--n",
            "7",
            "--q",
            "2",
            "--delta",
            "0.1"
        ])
        .status
        .code(),
        Some(1)
    );
}

#[test]
fn decompose_table_for_n7_over_gf2() {
    let o = run(&["decompose", "--n", "7", "--q", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row = text
        .lines()
        .find(|l| l.starts_with("1\t"))
        .expect("one block row");
    let cols: Vec<&str> = row.split('\t').collect();
    assert_eq!(cols[1], "split");
    assert_eq!(cols[2], "3");
    assert_eq!(&cols[4..], ["12", "3", "6", "6"]);

    let v = json(&["decompose", "--n", "15", "--q", "2^2", "--json"]);
    let ks: u64 = v["blocks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["k"].as_u64().unwrap())
        .sum();
    assert_eq!(ks, 7);
}

#[test]
fn bounds_report_vacuous_for_small_lambda() {
    let v = json(&[
        "bounds", "--n", "101", "--q", "2", "--delta", "0.1", "--json",
    ]);
    assert_eq!(v["lambda"], 100);
    assert_eq!(v["bound_rate_half"]["vacuous"], true);
    let ratio = v["bound_rate_half"]["log_q"].as_f64().unwrap()
        - v["bound_rate_half_minus"]["log_q"].as_f64().unwrap();
    assert!((ratio - 5f64.log2()).abs() < 1e-9);
}

#[test]
fn build_code_then_min_weight_and_audit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("code.txt");
    let p = path.to_str().unwrap();
    let o = run(&[
        "build-code",
        "--n",
        "7",
        "--q",
        "4",
        "--kind",
        "hatC",
        "--beta-seed",
        "11",
        "--out",
        p,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("4 14 7\n"));

    let mw = json(&["min-weight", "--in", p, "--json"]);
    assert_eq!(mw["kind"], "exact");
    let w = mw["weight"].as_u64().unwrap();
    let witness = mw["witness"].as_array().unwrap();
    assert_eq!(
        witness.iter().filter(|x| x.as_u64() != Some(0)).count() as u64,
        w
    );

    let flags = json(&["audit-duality", "--in", p, "--json"]);
    assert_eq!(flags["self_dual"], true);
    assert_eq!(flags["hull_dim"], 7);

    let missing = dir.path().join("missing.txt");
    assert_eq!(
        run(&["min-weight", "--in", missing.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn seeded_audit_passes_in_char_two() {
    let v = json(&[
        "audit-duality",
        "--n",
        "9",
        "--q",
        "2",
        "--kind",
        "hatC",
        "--trials",
        "20",
        "--seed",
        "4",
        "--json",
    ]);
    assert_eq!(v["passed"], 20);
}

fn ensemble_csv(dir: &Path, threads: &str, name: &str) -> String {
    let path = dir.join(name);
    let o = run(&[
        "--threads",
        threads,
        "ensemble",
        "--n",
        "7",
        "--q",
        "3",
        "--kind",
        "hatC",
        "--delta",
        "0.2",
        "--trials",
        "25",
        "--seed",
        "77",
        "--csv",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn ensemble_csv_is_reproducible_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let a = ensemble_csv(dir.path(), "1", "a.csv");
    let b = ensemble_csv(dir.path(), "1", "b.csv");
    let c = ensemble_csv(dir.path(), "8", "c.csv");
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert_eq!(a.lines().count(), 26);
}

#[test]
fn ensemble_json_round_trip() {
    let v = json(&[
        "ensemble", "--n", "7", "--q", "2", "--kind", "C", "--delta", "0.25", "--trials", "5",
        "--seed", "3", "--json",
    ]);
    assert_eq!(v["regime"], "self-orthogonal");
    let trials = v["per_trial"].as_array().unwrap();
    assert_eq!(trials.len(), 5);
    assert!(trials.iter().all(|t| t["dim"] == 6));
    let again: Value = serde_json::from_str(&v.to_string()).unwrap();
    assert_eq!(again, v);
}

#[test]
fn failed_regime_audit_exits_with_two() {
    let o = run(&[
        "ensemble", "--n", "11", "--q", "3", "--kind", "C", "--delta", "0.1", "--trials", "2",
        "--seed", "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn sieve_and_admissible_outputs() {
    let s = json(&["sieve", "--q", "2", "--t", "10000", "--json"]);
    assert_eq!(s["pi_t"], 1229);
    let a = json(&[
        "admissible",
        "--kind",
        "minus-one",
        "--q",
        "3",
        "--count",
        "4",
        "--delta",
        "0.05",
        "--json",
    ]);
    let rows = a.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["minus_one_in_q"] == true));
}

#[test]
fn selftest_single_suite() {
    let o = run(&["selftest", "--suite", "bound-evaluators"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS bound-evaluators"));
    assert_eq!(
        run(&["selftest", "--suite", "no-such-suite"]).status.code(),
        Some(1)
    );
}
