use std::io::Write;
use std::process::{Command, Output, Stdio};

fn berge() -> Command {
    Command::new(env!("CARGO_BIN_EXE_berge"))
}

fn run(args: &[&str]) -> Output {
    berge().args(args).output().expect("spawn")
}

fn run_with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = berge()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn");
    child.stdin.as_mut().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().expect("wait")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_temp(name: &str, contents: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("berge-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

/// Two vertices joined to every pair of {2, 3, 4}: contains a Berge-K4.
const PAIR_STAR: &str = "5 6\n0 2 3\n0 3 4\n0 2 4\n1 2 3\n1 2 4\n1 3 4\n";

#[test]
fn construct_prints_the_balanced_system() {
    let out = run(&["construct", "--n", "6"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("6 8\n"), "got: {text}");
    assert_eq!(text.lines().count(), 9);
}

#[test]
fn construct_detect_round_trip_is_free() {
    let built = run(&["construct", "--n", "9"]);
    assert!(built.status.success());
    let out = run_with_stdin(&["detect", "--pattern", "k4"], &stdout(&built));
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("no Berge copy"));
}

#[test]
fn detect_reports_an_embedding_with_exit_one() {
    let path = write_temp("hit.txt", PAIR_STAR);
    let out = run(&["detect", "--pattern", "k4", "--input", path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["core"].as_array().unwrap().len(), 4);
    assert_eq!(v["assignment"].as_array().unwrap().len(), 6);
}

#[test]
fn malformed_input_exits_two_with_line_number() {
    let path = write_temp("bad.txt", "3 2\n0 1 2\n");
    let out = run(&["detect", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
}

#[test]
fn unknown_flag_exits_two() {
    let out = run(&["detect", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn trace_emits_labeled_loops_and_links() {
    let built = run(&["construct", "--n", "6"]);
    let out = run_with_stdin(&["trace", "--core", "0,2,4", "--json"], &stdout(&built));
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let loops = v["loops"].as_array().unwrap();
    let links = v["links"].as_array().unwrap();
    assert_eq!(loops.len(), 3);
    assert_eq!(links.len(), 3);
    assert!(loops[0]["v"].is_number());
    assert_eq!(loops[0]["label"].as_array().unwrap().len(), 2);
    assert_eq!(links[0]["label"].as_array().unwrap().len(), 1);
}

#[test]
fn extremal_value_and_budget_exit() {
    let out = run(&["extremal", "--n", "5", "--spec", "berge", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["value"], 5);
    assert_eq!(v["exhausted"], true);

    let out = run(&["extremal", "--n", "6", "--node-budget", "3"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn certify_exit_codes_cover_all_outcomes() {
    let ok = run(&["certify", "--n", "6", "--claimed", "8", "--json"]);
    assert_eq!(ok.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&ok)).unwrap();
    for key in ["n", "spec", "value", "witness", "exhausted", "nodes", "config"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }

    let low = run(&["certify", "--n", "6", "--claimed", "7"]);
    assert_eq!(low.status.code(), Some(1));
    let high = run(&["certify", "--n", "6", "--claimed", "9"]);
    assert_eq!(high.status.code(), Some(1));
    let broke = run(&["certify", "--n", "6", "--claimed", "8", "--node-budget", "3"]);
    assert_eq!(broke.status.code(), Some(3));
}

#[test]
fn certify_supports_graph_cliques() {
    let out = run(&[
        "certify",
        "--n",
        "6",
        "--spec",
        "graph-clique",
        "--pattern",
        "k4",
        "--claimed",
        "12",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["spec"], "graph-clique(4)");
    assert_eq!(v["witness"].as_array().unwrap().len(), 12);
}

#[test]
fn inequality_lists_the_six_entry() {
    let out = run(&["inequality", "--n", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("6: 6 vs 4"), "got: {text}");
}

#[test]
fn reproduce_fast_certifies_the_table() {
    let out = run(&["reproduce", "--fast", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = rows.as_array().unwrap();
    assert!(rows.iter().all(|r| r["ok"] == true));
    assert!(rows.iter().any(|r| r["family"] == "berge(K4)" && r["n"] == 6 && r["value"] == 8));
    assert!(rows
        .iter()
        .any(|r| r["family"] == "graph-clique(4)" && r["n"] == 8 && r["value"] == 21));
    // --fast drops exactly the n = 7 Berge-K4 row.
    assert!(!rows.iter().any(|r| r["family"] == "berge(K4)" && r["n"] == 7));
}
