//! End-to-end tests of the binary: run it the way a user would and check
//! the text, the JSON, and the exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lparity"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn tmp_dir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("lparity-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn write_tmp(tag: &str, name: &str, content: &str) -> PathBuf {
    let p = tmp_dir(tag).join(name);
    std::fs::write(&p, content).unwrap();
    p
}

#[test]
fn fixtures_list_and_emit() {
    let out = run(&["fixtures", "--list"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for name in ["order9", "order10", "order11", "L5", "rowlatin2", "rowlatin6"] {
        assert!(text.contains(name), "missing {name} in:\n{text}");
    }

    let dir = tmp_dir("emit");
    let out = run(&["fixtures", "--emit", dir.to_str().unwrap()]);
    assert!(out.status.success());
    let mut count = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "lsq") {
            let text = std::fs::read_to_string(&path).unwrap();
            lparity_core::parse_square(&text).expect("emitted file re-parses");
            count += 1;
        }
    }
    assert_eq!(count, 6);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn analyze_depleted_prints_corner_count() {
    let file = write_tmp("l5", "L5.lsq", lparity_core::fixtures::L5);
    let out = run(&["analyze", file.to_str().unwrap(), "--depleted"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("t:"), "{text}");
    // first row of the deletion table starts with t_11 = 1
    assert!(text.contains("[1, 7, 3, 3, 3]"), "{text}");
}

#[test]
fn analyze_json_round_trips() {
    let file = write_tmp("json", "L5.lsq", lparity_core::fixtures::L5);
    let out = run(&[
        "analyze",
        file.to_str().unwrap(),
        "--spectrum",
        "--signed",
        "--types",
        "--depleted",
        "--r-seq",
        "--ev",
        "--json",
    ]);
    assert!(out.status.success());
    let rep: lparity_core::AnalysisReport = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(rep.order, 5);
    assert_eq!(rep.transversals, Some(3));
    assert_eq!(rep.signed, Some(-3));
    let e = rep.e.expect("spectrum present");
    assert_eq!(e.iter().sum::<u64>(), 120);
    assert_eq!(e[4], 3);
    let t = rep.t.expect("deletion table present");
    assert_eq!(t[0][0], 1);
    let r = rep.r.expect("subset sums present");
    assert_eq!(r[0], 5);
    assert_eq!(r[4], 120);
    let ev = rep.e_ev.expect("even spectrum present");
    assert_eq!(ev.iter().sum::<u64>(), 60);
    // signed count and transversal count agree mod 2
    assert_eq!(
        rep.signed.unwrap().rem_euclid(2) as u64,
        rep.transversals.unwrap() % 2
    );
}

#[test]
fn analyze_signed_on_order_nine() {
    let file = write_tmp("o9", "order9.lsq", lparity_core::fixtures::ORDER9);
    let out = run(&["analyze", file.to_str().unwrap(), "--signed", "--json"]);
    assert!(out.status.success());
    let rep: lparity_core::AnalysisReport = serde_json::from_str(stdout(&out).trim()).unwrap();
    let e9 = rep.transversals.unwrap();
    let signed = rep.signed.unwrap();
    assert_eq!(signed.rem_euclid(2) as u64, e9 % 2);
}

#[test]
fn analyze_empty_array_is_clean() {
    let file = write_tmp("empty", "empty.lsq", "0 0 0\n");
    let out = run(&["analyze", file.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("latin-array"), "{text}");
    assert!(text.contains("transversals: 1"), "{text}");
}

#[test]
fn analyze_row_latin_fixture() {
    let file = write_tmp("rl6", "rl6.lsq", lparity_core::fixtures::ROW_LATIN6);
    let out = run(&["analyze", file.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("row-latin-square"), "{text}");
    assert!(text.contains("transversals: 6"), "{text}");
}

#[test]
fn analyze_reports_parse_position() {
    let file = write_tmp("bad", "bad.lsq", "2\n1 2\n2 3\n");
    let out = run(&["analyze", file.to_str().unwrap()]);
    assert!(!out.status.success());
    let err = stderr(&out);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn verify_exhaustive_four_all_theorems() {
    let out = run(&["verify", "--exhaustive", "4", "--all-theorems"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("failures: 0"), "{text}");
    // JSON lines precede the summary and parse as reports
    let first = text.lines().next().unwrap();
    let rep: lparity_core::ClaimReport = serde_json::from_str(first).unwrap();
    assert!(!rep.claim.is_empty());
}

#[test]
fn verify_selected_claims_order_six() {
    let out = run(&[
        "verify",
        "--exhaustive",
        "6",
        "--claims",
        "thm-trans-mult-4,thm-det-mult-4,cor-types",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("subjects: 9408"), "{text}");
    assert!(text.contains("failures: 0"), "{text}");
}

#[test]
fn verify_rejects_unknown_claim() {
    let out = run(&["verify", "--fixtures", "--claims", "thm-nope"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("unknown claim"), "{}", stderr(&out));
}

#[test]
fn verify_random_conjectures() {
    let out = run(&["verify", "--random", "6", "20", "11", "--conjectures"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("subjects: 20"), "{text}");
    assert!(text.contains("failures: 0"), "{text}");
}

#[test]
fn verify_threads_output_is_canonical() {
    let one = run(&["verify", "--exhaustive", "4", "--all-theorems", "--threads", "1"]);
    let four = run(&["verify", "--exhaustive", "4", "--all-theorems", "--threads", "4"]);
    assert!(one.status.success() && four.status.success());
    // elapsed fields differ between runs; compare with them stripped
    let strip = |s: &str| -> String {
        s.lines()
            .map(|l| match serde_json::from_str::<serde_json::Value>(l) {
                Ok(mut v) if v.get("elapsed_ms").is_some() => {
                    v["elapsed_ms"] = serde_json::json!(0);
                    v.to_string()
                }
                _ => l.to_string(),
            })
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&stdout(&one)), strip(&stdout(&four)));
}

#[test]
fn verify_fixture_corpus() {
    let out = run(&["verify", "--fixtures", "--claims", "thm-same-delta-row,thm-bala"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("subjects: 6"), "{text}");
    assert!(text.contains("failures: 0"), "{text}");
}

#[test]
fn gen_is_deterministic_and_valid() {
    let a = run(&["gen", "--order", "6", "--seed", "7"]);
    let b = run(&["gen", "--order", "6", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    match lparity_core::parse_square(&stdout(&a)).unwrap() {
        lparity_core::Parsed::Latin(l) => assert_eq!(l.order(), 6),
        other => panic!("gen produced a {}", other.class_name()),
    }
}

#[test]
fn search_trivial_target_succeeds() {
    // target the square's own residue: immediate hit at step 0
    let l9 = lparity_core::fixtures::order9();
    let count = lparity_core::spectrum::count_transversals(&l9);
    let k = (count % 8).to_string();
    let out = run(&[
        "search",
        "--order-fixture",
        "9",
        "--target",
        &k,
        "--mod",
        "8",
        "--budget",
        "10",
        "--seed",
        "0",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["outcome"]["status"], "found");
    assert_eq!(v["steps"], 0);
    assert_eq!(v["outcome"]["transversals"], count);
}

#[test]
fn search_excluded_class_reports_exclusion() {
    let out = run(&[
        "search",
        "--order-fixture",
        "10",
        "--target",
        "1",
        "--mod",
        "2",
        "--budget",
        "10",
        "--seed",
        "0",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["outcome"]["status"], "excluded");
}

#[test]
fn search_from_input_file() {
    let file = write_tmp("search", "order9.lsq", lparity_core::fixtures::ORDER9);
    let out = run(&[
        "search",
        "--input",
        file.to_str().unwrap(),
        "--target",
        "0",
        "--mod",
        "3",
        "--budget",
        "200000",
        "--seed",
        "5",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["outcome"]["status"], "found");
    let trans = v["outcome"]["transversals"].as_u64().unwrap();
    assert_eq!(trans % 3, 0);
}
