use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_supmetric")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = run(&all);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn table1_matches_and_renders() {
    let o = run(&["table1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0].matches('✓').count(), 5);
    assert_eq!(rows[3].matches('✓').count(), 0);
    assert_eq!(json(&["table1"])["matches_published"], true);
}

#[test]
fn weight_of_chain_structure() {
    let o = run(&["weight", &data("chain_l12.json"), "01"]);
    assert_eq!(stdout(&o).trim(), "3");
    assert_eq!(json(&["weight", &data("stepped.json"), "11"])["weight"], 4);
}

#[test]
fn standardize_stepped_weight() {
    let v = json(&["standardize", &data("stepped.json")]);
    assert_eq!(v["weights"]["01"], 2);
    assert_eq!(v["weights"]["11"], 3);
    let mut values: Vec<u64> = v["weights"].as_object().unwrap().values().map(|x| x.as_u64().unwrap()).collect();
    values.sort();
    assert_eq!(values, vec![0, 1, 2, 3]);
}

#[test]
fn standardize_output_round_trips() {
    let dir = std::env::temp_dir().join(format!("supmetric-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let once = dir.join("once.json");
    let o = run(&["standardize", &data("stepped.json"), "--format", "json", "-o", once.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let twice = json(&["standardize", once.to_str().unwrap()]);
    let first: Value = serde_json::from_str(&std::fs::read_to_string(&once).unwrap()).unwrap();
    assert_eq!(first, twice);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn classify_row_four() {
    let v = json(&["classify", &data("row4.json")]);
    assert_eq!(v["valid"], true);
    assert_eq!(v["class"], "wt(10)<wt(01)<wt(11)");
    assert_eq!(v["families"].as_array().unwrap().len(), 0);
    assert!(v["cube"]["trail_mismatch"].is_null());
    let bad = json(&["classify", &data("invalid.json")]);
    assert_eq!(bad["valid"], false);
}

#[test]
fn isometries_of_chain() {
    let v = json(&["isometries", &data("chain_l12.json")]);
    assert_eq!(v["holds"], true);
    assert_eq!(v["gl_order"], 2);
}

#[test]
fn enumerator_text() {
    let o = run(&["enumerator", &data("chain_l12.json"), &data("code_11.json")]);
    assert_eq!(stdout(&o).trim(), "1 + X^3");
}

#[test]
fn macwilliams_counterexample_for_udp_violation() {
    let v = json(&["macwilliams", &data("antichain_l112.json"), "--k", "1"]);
    assert_eq!(v["udp"]["holds"], false);
    assert_eq!(v["per_k"][0]["verdict"]["verdict"], "counterexample");
    let ok = json(&["macwilliams", &data("chain_l12.json")]);
    assert_eq!(ok["admits"], true);
}

#[test]
fn decompose_chain_code() {
    let v = json(&["decompose", &data("chain_l12.json"), &data("code_11.json")]);
    assert_eq!(v["code"]["entries"], serde_json::json!([[0, 1]]));
    let o = run(&["decompose", &data("non_hierarchical.json"), &data("code_011.json")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn reach_row_four_at_depth_one() {
    let v = json(&["reach", &data("row4.json")]);
    assert_eq!(v["node"], "sum");
    let report = json(&["reach", "--n", "2"]);
    assert!(report["classes"].as_array().unwrap().iter().all(|c| !c["depth"].is_null()));
}

#[test]
fn criteria_counts() {
    assert_eq!(json(&["criteria", "--n", "2"])["classes"].as_array().unwrap().len(), 4);
    assert_eq!(json(&["criteria", "--n", "2", "--labeled"])["classes"].as_array().unwrap().len(), 6);
}

#[test]
fn dot_outputs() {
    let o = run(&["weight", &data("chain_l12.json"), "01", "--format", "dot"]);
    assert!(stdout(&o).contains("label=\"2: L=2, k=1\""));
    let o = run(&["standardize", &data("stepped.json"), "--format", "dot"]);
    assert!(stdout(&o).starts_with("digraph cube"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["weight", &data("truncated.json"), "01"]).status.code(), Some(2));
    assert_eq!(run(&["weight", &data("chain_l12.json"), "012"]).status.code(), Some(2));
    assert_eq!(run(&["weight", &data("chain_l12.json"), "011"]).status.code(), Some(1));
    assert_eq!(run(&["isometries", &data("chain_l12.json"), "--cap-gl", "1"]).status.code(), Some(3));
    assert_eq!(run(&["criteria", "--n", "2", "--cap-gl", "9999999999999"]).status.code(), Some(3));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn deterministic_output() {
    let a = stdout(&run(&["reach", "--n", "2", "--format", "json"]));
    let b = stdout(&run(&["reach", "--n", "2", "--format", "json"]));
    assert_eq!(a, b);
}
