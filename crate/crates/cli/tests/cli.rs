//! End-to-end tests of the binary: exit codes, report schema, determinism
//! and the cache lifecycle.

use std::path::Path;
use std::process::{Command, Output};

fn cehom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cehom"))
        .args(args)
        .env_remove("CEHOM_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn lyndon_command_agrees_with_witt() {
    let out = cehom(&["lyndon", "--max-weight", "3"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("aab"));
    assert!(text.contains("length 3: 2 words, witt 2"));

    let out = cehom(&["lyndon", "--max-weight", "1"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("length  1 (   2): a b"));

    let out = cehom(&["lyndon", "--max-weight", "12", "--format", "json"]);
    assert_eq!(exit_code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["verdicts"][0]["pass"], serde_json::json!(true));
}

#[test]
fn report_schema_is_stable() {
    let out = cehom(&["lyndon", "--max-weight", "2", "--format", "json"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    for key in ["tool_version", "config_echo", "verdicts"] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
    let verdict = &report["verdicts"][0];
    for key in ["name", "parameters", "pass", "witnesses", "timing_ms"] {
        assert!(verdict.get(key).is_some(), "missing verdict key {key}");
    }
    assert_eq!(verdict["timing_ms"], serde_json::json!(0));
}

#[test]
fn homology_free_is_acyclic_above_degree_one() {
    let out = cehom(&[
        "homology",
        "--algebra",
        "free",
        "--max-weight",
        "8",
        "--cache-dir",
        "off",
        "--format",
        "json",
    ]);
    assert_eq!(exit_code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let entries = report["betti_tables"][0]["entries"].as_array().unwrap();
    for e in entries {
        let (p, n, dim) = (
            e["p"].as_u64().unwrap(),
            e["n"].as_u64().unwrap(),
            e["dim"].as_u64().unwrap(),
        );
        let expected = match (p, n) {
            (0, 0) => 1,
            (1, 1) => 2,
            _ => 0,
        };
        assert_eq!(dim, expected, "H_{p}({n})");
    }
}

#[test]
fn homology_quot_k_odd_pattern() {
    let out = cehom(&[
        "homology",
        "--algebra",
        "quot-k",
        "--max-weight",
        "15",
        "--cache-dir",
        "off",
        "--format",
        "json",
    ]);
    assert_eq!(exit_code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let entries = report["betti_tables"][0]["entries"].as_array().unwrap();
    for e in entries {
        if e["p"].as_u64().unwrap() == 2 {
            let n = e["n"].as_u64().unwrap();
            let expected = u64::from(n >= 3 && n % 2 == 1);
            assert_eq!(e["dim"].as_u64().unwrap(), expected, "H_2({n})");
        }
    }
}

#[test]
fn homology_quot_j_occurrence_two_matches_free() {
    let out = cehom(&[
        "homology",
        "--algebra",
        "quot-j",
        "--occurrence",
        "2",
        "--max-weight",
        "10",
        "--compare-with",
        "free",
        "--cache-dir",
        "off",
        "--format",
        "json",
    ]);
    assert_eq!(exit_code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let comparison = report["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["name"] == "chain-cell-comparison")
        .expect("comparison verdict present");
    assert_eq!(comparison["pass"], serde_json::json!(true));
    // both tables emitted, identical entries
    let tables = report["betti_tables"].as_array().unwrap();
    assert_eq!(tables.len(), 2);
    assert_eq!(tables[0]["entries"], tables[1]["entries"]);
}

#[test]
fn unknown_algebra_is_a_usage_error() {
    let out = cehom(&["homology", "--algebra", "so3"]);
    assert_eq!(exit_code(&out), 2);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("unknown algebra selector"));
}

#[test]
fn certify_default_inputs_pass() {
    let out = cehom(&["certify", "--cache-dir", "off", "--format", "json"]);
    assert_eq!(exit_code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let verdicts = report["verdicts"].as_array().unwrap();
    assert!(verdicts
        .iter()
        .all(|v| v["pass"] == serde_json::json!(true)));
    for name in [
        "sequence-admissibility",
        "f-set-combinatorics",
        "submatrix-dichotomy",
        "domega-equality",
        "d-injective-occ2-degree3",
        "rank-bound",
        "independence",
    ] {
        assert!(
            verdicts.iter().any(|v| v["name"] == name),
            "missing verdict {name}"
        );
    }
}

#[test]
fn certify_rejects_non_admissible_sequences() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.json");
    std::fs::write(&input, r#"{"r": [3], "s": [2], "subsets": [[1]]}"#).unwrap();
    let out = cehom(&[
        "certify",
        "--input",
        input.to_str().unwrap(),
        "--cache-dir",
        "off",
        "--format",
        "json",
    ]);
    assert_eq!(exit_code(&out), 1);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let admissibility = &report["verdicts"][0];
    assert_eq!(admissibility["name"], "sequence-admissibility");
    assert_eq!(admissibility["pass"], serde_json::json!(false));
    assert!(admissibility["witnesses"]
        .as_array()
        .unwrap()
        .iter()
        .any(|w| w.as_str().unwrap().contains("growth broken")));
}

#[test]
fn certify_empty_subsets_is_vacuous() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("empty.json");
    std::fs::write(&input, r#"{"minimal": 2, "subsets": []}"#).unwrap();
    let out = cehom(&[
        "certify",
        "--input",
        input.to_str().unwrap(),
        "--max-weight",
        "24",
        "--cache-dir",
        "off",
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("vacuous"));
}

#[test]
fn certify_malformed_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("broken.json");
    std::fs::write(&input, "{not json").unwrap();
    let out = cehom(&["certify", "--input", input.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8(out.stderr).unwrap().contains("malformed"));

    let input2 = dir.path().join("incomplete.json");
    std::fs::write(&input2, r#"{"r": [5], "subsets": []}"#).unwrap();
    let out = cehom(&["certify", "--input", input2.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn reports_are_byte_identical_across_runs_and_jobs() {
    let run = |jobs: &str| {
        let out = cehom(&[
            "certify",
            "--max-weight",
            "24",
            "--cache-dir",
            "off",
            "--format",
            "json",
            "--jobs",
            jobs,
        ]);
        assert_eq!(exit_code(&out), 0);
        out.stdout
    };
    let first = run("1");
    let second = run("1");
    let parallel = run("4");
    assert_eq!(first, second);
    assert_eq!(first, parallel);

    let homology = |jobs: &str| {
        let out = cehom(&[
            "homology",
            "--algebra",
            "free",
            "--max-weight",
            "7",
            "--cache-dir",
            "off",
            "--format",
            "json",
            "--jobs",
            jobs,
        ]);
        assert_eq!(exit_code(&out), 0);
        out.stdout
    };
    assert_eq!(homology("1"), homology("4"));
}

#[test]
fn cache_lifecycle() {
    let dir = tempfile::tempdir().unwrap();
    let cache_dir = dir.path().to_str().unwrap();
    let run_homology = || {
        cehom(&[
            "homology",
            "--algebra",
            "free",
            "--max-weight",
            "6",
            "--cache-dir",
            cache_dir,
            "--format",
            "json",
        ])
    };
    let out = run_homology();
    assert_eq!(exit_code(&out), 0);
    let cache_file = Path::new(cache_dir).join("free_w6_v1.json");
    assert!(cache_file.exists(), "cache written on first run");

    let out = cehom(&[
        "cache",
        "inspect",
        "--cache-dir",
        cache_dir,
        "--format",
        "json",
    ]);
    assert_eq!(exit_code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["cache_entries"][0]["valid"], serde_json::json!(true));

    // cached second run gives the same verdicts
    let out = run_homology();
    assert_eq!(exit_code(&out), 0);

    // corrupt the payload: the run warns and recomputes, inspect flags it
    let mut text = std::fs::read_to_string(&cache_file).unwrap();
    text = text.replace("\"checksum\":\"", "\"checksum\":\"00");
    std::fs::write(&cache_file, text).unwrap();
    let out = run_homology();
    assert_eq!(exit_code(&out), 0);
    assert!(String::from_utf8(out.stderr.clone())
        .unwrap()
        .contains("corrupt"));

    let out = cehom(&["cache", "clear", "--cache-dir", cache_dir]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("removed 1 entries"));
    assert!(!cache_file.exists());
}

#[test]
fn environment_variable_sets_the_cache_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_cehom"))
        .args(["homology", "--algebra", "free", "--max-weight", "5"])
        .env("CEHOM_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("free_w5_v1.json").exists());
}

#[test]
fn csv_output_flattens_records() {
    let out = cehom(&[
        "homology",
        "--algebra",
        "quot-k",
        "--max-weight",
        "5",
        "--cache-dir",
        "off",
        "--format",
        "csv",
    ]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "record,name,pass,timing_ms,parameters,witnesses,notes"
    );
    assert!(text.lines().any(|l| l.starts_with("verdict,")));
    assert!(text.lines().any(|l| l.starts_with("betti,")));
}
