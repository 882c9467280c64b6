use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trifractal")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = run(&all);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn enumerate_examples() {
    let v = json(&["enumerate", "--family", "dcycle", "-n", "6"]);
    assert_eq!(v["count"], "42");
    assert_eq!(v["final"], true);
    assert_eq!(v["provenance"], "enumerated");
    assert_eq!(json(&["enumerate", "--family", "hpath", "-n", "2"])["count"], "1");
    assert_eq!(json(&["enumerate", "--family", "hpath", "-n", "3", "-k", "2"])["count"], "320");
}

#[test]
fn enumerate_emits_samples() {
    let v = json(&["enumerate", "-f", "wpath", "-n", "4", "--emit", "10"]);
    assert_eq!(v["samples"].as_array().unwrap().len(), 4);
}

#[test]
fn z_paths_agree_across_corners() {
    for corner in ["top", "left", "right"] {
        let v = json(&["enumerate", "-f", "zpath", "-n", "5", "--removed-corner", corner]);
        assert_eq!(v["count"], "112", "{corner}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["enumerate", "--family", "xpath", "-n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["enumerate", "--family", "hpath", "-n", "1"]).status.code(), Some(2));
    let o = run(&["enumerate", "--family", "hpath", "-n", "7", "--budget", "100"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("partial"));
    assert_eq!(
        run(&["--budget-nodes", "100", "enumerate", "-f", "hpath", "-n", "3", "-k", "3"]).status.code(),
        Some(3)
    );
    assert_eq!(run(&["--budget-digits", "50", "count", "hpaths", "4", "3"]).status.code(), Some(3));
    assert_eq!(run(&["count", "ccycles", "4", "2", "--mode", "explicit"]).status.code(), Some(2));
}

#[test]
fn count_examples() {
    let v = json(&["count", "onodes", "6", "3", "--mode", "both"]);
    assert_eq!(v["decimal"], "11578");
    let v = json(&["count", "dcycles", "5", "3", "--mode", "both", "--primes"]);
    assert_eq!(v["factored"], serde_json::json!([["2", "14403"]]));
    assert_eq!(v["scalar"], "1");
    assert_eq!(v["provenance"]["base"], "enumerated");
    let o = run(&["count", "hpaths", "3", "4", "--mode", "both"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("hpaths(3,4) = 10^43·2^173 = "));
    assert_eq!(json(&["count", "hpaths", "4", "2"])["decimal"], "273420000000");
    assert_eq!(json(&["count", "ccycles", "4", "2"])["decimal"], "132300000000");
    assert_eq!(json(&["count", "spaths", "4", "2"])["decimal"], "4194304");
}

#[test]
fn table_mode_is_flagged() {
    let v = json(&["count", "hpaths", "7", "2", "--trust-tables"]);
    assert_eq!(v["provenance"]["base"], "paper-table");
    assert_eq!(v["provenance"]["groups"], "paper-table");
    let e = json(&["count", "hpaths", "7", "2"]);
    assert_eq!(e["provenance"]["base"], "enumerated");
    assert_eq!(v["decimal"], e["decimal"]);
}

#[test]
fn over_budget_values_stay_factored() {
    let v = json(&["count", "spaths", "6", "40"]);
    assert!(v["decimal"].is_null());
    assert_eq!(v["factored"][0][0], "68");
}

#[test]
fn verify_suites_pass() {
    for suite in ["table2", "table3", "figures"] {
        let o = run(&["verify", suite]);
        assert!(o.status.success(), "{suite}: {}", stdout(&o));
    }
    let o = run(&["verify", "table1", "--n-max", "5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).matches("PASS").count(), 24);
}

#[test]
fn render_is_deterministic() {
    let a = run(&["render", "pattern", "-n", "4", "-k", "2"]);
    let b = run(&["render", "pattern", "-n", "4", "-k", "2"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).matches("class=\"dark\"").count(), 100);
    let g = stdout(&run(&["render", "graph", "--graph", "overall", "-n", "3", "-k", "2"]));
    assert_eq!(g.matches("class=\"node\"").count(), 52);
    let d = stdout(&run(&["render", "path-sample", "-f", "dcycle", "-n", "4"]));
    assert_eq!(d.matches("class=\"tick\"").count(), 10);
    assert_eq!(run(&["render", "path-sample", "-n", "4"]).status.code(), Some(2));
}

#[test]
fn render_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.svg");
    let o = run(&[
        "render",
        "path-sample",
        "-f",
        "spath",
        "-n",
        "3",
        "-k",
        "2",
        "--index",
        "5",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("class=\"tick\"").count(), 36);
}

#[test]
fn graph_export_formats() {
    let o = run(&["graph-export", "--graph", "overall", "-n", "4", "-k", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["family"], "overall");
    assert_eq!(v["nodes"].as_array().unwrap().len(), 135);
    assert_eq!(v["edges"].as_array().unwrap().len(), 300);
    let dot = stdout(&run(&["graph-export", "--graph", "inscribed", "-n", "3", "-k", "2", "--format", "dot"]));
    assert!(dot.starts_with("graph inscribed_3_2 {"));
    assert_eq!(dot.matches(" -- ").count(), 63);
}

#[test]
fn warm_cache_gives_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");
    let c = cache.to_str().unwrap();
    let cold = run(&["--cache", c, "--json", "enumerate", "-f", "ccycle", "-n", "6"]);
    let warm = run(&["--cache", c, "--json", "enumerate", "-f", "ccycle", "-n", "6"]);
    assert!(cold.status.success());
    assert_eq!(cold.stdout, warm.stdout);
    let text = std::fs::read_to_string(&cache).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.contains("\"provenance\":\"enumerated\""));
    let counted = run(&["--cache", c, "count", "ccycles", "6", "2"]);
    assert!(stdout(&counted).contains("base counts: cache"));
}

#[test]
fn transform_round_trip() {
    let fwd = json(&["transform", "--from", "wpath", "-n", "5", "--index", "7"]);
    assert_eq!(fwd["to"], "spath");
    let nodes: Vec<String> = fwd["output"].as_array().unwrap().iter().map(|v| v.to_string()).collect();
    let back = json(&["transform", "--from", "spath", "-n", "5", "--nodes", &nodes.join(",")]);
    assert_eq!(back["output"], fwd["input"]);
    let c = json(&["transform", "--from", "ccycle", "-n", "5", "--index", "1"]);
    assert_eq!(c["to"], "dcycle");
    let bad = run(&["transform", "--from", "wpath", "-n", "2", "--nodes", "0,1,2"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn classify_table() {
    let v = json(&["classify", "--object", "dcycle", "-n", "5"]);
    assert_eq!(v["total"], 8);
    assert_eq!(v["groups"][1], serde_json::json!({"v": 6, "pure": 9, "mult": 2}));
}
