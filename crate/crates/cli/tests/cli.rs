use std::path::Path;
use std::process::{Command, Output};

use proptest::prelude::*;
use serde_json::Value;

fn numacap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_numacap")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).unwrap_or_else(|e| panic!("{e}: {}", stdout(out)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn eval_examples() {
    let out = numacap(&["eval", "--topology", "cq3", "--vnuma", "k2", "--caps", "1,1,1,1,1,1,1,1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "4");

    let out = numacap(&["eval", "--topology", "q33", "--vnuma", "c4", "--caps", "1,2,3,4,5,6,7,8", "--json"]);
    assert_eq!(json(&out), serde_json::json!({"count": 8}));

    let out = numacap(&["eval", "--topology", "k4", "--vnuma", "k3", "--caps", "0,0,0,0"]);
    assert_eq!(stdout(&out).trim(), "0");
}

#[test]
fn eval_without_closed_form_says_so() {
    let out = numacap(&["eval", "--topology", "cq3", "--vnuma", "k3", "--caps", "1,1,1,1,1,1,1,1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "0");
    assert!(stderr(&out).contains("exhaustive search"));
}

#[test]
fn input_errors_exit_2() {
    for args in [
        &["eval", "--topology", "c4", "--vnuma", "k2", "--caps", "1,2"][..],
        &["eval", "--topology", "c5", "--vnuma", "k2", "--caps", "1,2,3,4"],
        &["eval", "--topology", "c4", "--vnuma", "k2", "--caps", "1,x,3,4"],
        &["eval", "--topology", "c4", "--vnuma", "k2", "--caps", "1,2,3,4294967296"],
        &["place", "--topology", "c4", "--vnuma", "k2"],
        &["verify", "--topology", "c4", "--vnuma", "k2"],
        &["verify", "--topology", "cq3", "--vnuma", "k3", "--max-cap", "1"],
        &["verify", "--topology", "cq3", "--vnuma", "k2", "--max-cap", "30"],
    ] {
        let out = numacap(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
        assert!(!stderr(&out).is_empty());
    }
}

#[test]
fn place_examples() {
    let out = numacap(&["place", "--topology", "k4", "--vnuma", "k2", "--caps", "3,2,1,0"]);
    assert_eq!(stdout(&out).trim(), r#"{"count":3,"matches":[[1,2],[1,2],[1,3]]}"#);

    let out = numacap(&["place", "--topology", "c4", "--vnuma", "k2", "--caps", "0,0,0,0"]);
    assert_eq!(stdout(&out).trim(), r#"{"count":0,"matches":[]}"#);

    let out = numacap(&["place", "--topology", "c4", "--vnuma", "k2", "--caps", "2,5,3,1"]);
    let v = json(&out);
    assert_eq!(v["count"], 5);
    let edges = [[1, 2], [2, 3], [3, 4], [1, 4]];
    for m in v["matches"].as_array().unwrap() {
        let pair: Vec<u64> = m.as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
        assert!(edges.iter().any(|e| e[0] == pair[0] && e[1] == pair[1]), "{pair:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn eval_and_place_agree(
        (topology, vnuma, caps) in prop::sample::select(vec![
            ("c4", "k2", 4), ("k4", "k3", 4), ("l4", "k2", 8), ("cq3", "k2", 8), ("cq3", "c4", 8), ("q33", "c4", 8),
        ]).prop_flat_map(|(t, v, n)| (Just(t), Just(v), prop::collection::vec(0..=30u64, n)))
    ) {
        let caps = caps.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        let eval = numacap(&["eval", "--topology", topology, "--vnuma", vnuma, "--caps", &caps, "--json"]);
        let place = numacap(&["place", "--topology", topology, "--vnuma", vnuma, "--caps", &caps]);
        let placed = json(&place);
        prop_assert_eq!(&json(&eval)["count"], &placed["count"]);
        prop_assert_eq!(placed["matches"].as_array().unwrap().len() as u64, placed["count"].as_u64().unwrap());
    }
}

#[test]
fn verify_examples() {
    let out = numacap(&["verify", "--topology", "c4", "--vnuma", "k2", "--max-cap", "5"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "c4/k2: 1296 cases, 0 mismatches");

    let out = numacap(&["verify", "--topology", "cq3", "--vnuma", "k2", "--max-cap", "2", "--json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["cases"], 6561);
    assert_eq!(v["mismatches"], 0);
    assert_eq!(v["mode"], "exhaustive");
}

#[test]
fn sampled_verify_is_reproducible() {
    let args = ["verify", "--topology", "q33", "--vnuma", "c4", "--samples", "300", "--seed", "11", "--json"];
    let first = numacap(&args);
    assert!(first.status.success(), "{}", stdout(&first));
    let v = json(&first);
    assert_eq!(v["cases"], 300);
    assert_eq!(v["max_cap"], 20);
    assert_eq!(v["seed"], 11);
    assert_eq!(stdout(&numacap(&args)), stdout(&first));
}

#[test]
fn corrupted_formula_is_caught() {
    let out = numacap(&["verify", "--topology", "k4", "--vnuma", "k2", "--max-cap", "3", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("first counterexample: caps=1,0,0,0 formula=1 oracle=0"), "{text}");

    let out = numacap(&[
        "verify", "--topology", "cq3", "--vnuma", "k2", "--samples", "50", "--seed", "1", "--inject-fault", "--json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["first_counterexample"]["caps"].is_array());
}

#[test]
fn bench_reports_both_paths() {
    let out = numacap(&["bench", "--topology", "cq3", "--vnuma", "k2", "--iters", "20000", "--json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["closed_form"]["iterations"], 20000);
    assert_eq!(v["oracle"]["iterations"], 1000);
    assert_eq!(v["method"], "cq3_k2");

    let out = numacap(&["bench", "--topology", "k12", "--vnuma", "k3", "--iters", "100"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("skipped"));
}

const FLAVORS: &str = r#"{"flavors": [
    {"id": "m.2n", "vnuma": "k2", "demand": {"cpu": 4, "mem": 16}},
    {"id": "m.1n", "vnuma": "k1", "demand": {"cpu": 4, "mem": 16}}
]}"#;

#[test]
fn cluster_total() {
    let dir = tempfile::tempdir().unwrap();
    let state = r#"{"servers": [
        {"id": "s1", "components": [{"topology": "c4", "capacities": [2, 2, 2, 2]}]},
        {"id": "s2", "components": [{"topology": "k4", "capacities": [2, 2, 2, 2]}]},
        {"id": "s3", "components": [{"topology": "q33", "capacities": [1, 1, 1, 1, 1, 1, 1, 1]}]}
    ]}"#;
    let state = write(dir.path(), "state.json", state);
    let flavors = write(dir.path(), "flavors.json", FLAVORS);
    let out = numacap(&["cluster", "--state", &state, "--flavors", &flavors, "--flavor", "m.2n", "--json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["total"], 12);
    let rows: Vec<u64> = v["servers"].as_array().unwrap().iter().map(|r| r["capacity"].as_u64().unwrap()).collect();
    assert_eq!(rows, [4, 4, 4]);

    let out = numacap(&["cluster", "--state", &state, "--flavors", &flavors, "--flavor", "m.2n"]);
    let text = stdout(&out);
    assert!(text.lines().last().unwrap().split_whitespace().eq(["total", "12"]), "{text}");
}

#[test]
fn cluster_mixed_components() {
    let dir = tempfile::tempdir().unwrap();
    let state = r#"{"servers": [{"id": "mixed", "components": [
        {"topology": "c4", "nodes": [{"cpu": 8, "mem": 64}, {"cpu": 4, "mem": 64}, {"cpu": 8, "mem": 8}, {"cpu": 16, "mem": 64}]},
        {"topology": "star4", "capacities": [10, 1, 1, 1, 1]}
    ]}]}"#;
    let state = write(dir.path(), "state.json", state);
    let flavors = write(dir.path(), "flavors.json", FLAVORS);
    let out = numacap(&["cluster", "--state", &state, "--flavors", &flavors, "--flavor", "m.2n", "--json"]);
    assert_eq!(json(&out)["total"], 2 + 4);
    let out = numacap(&["cluster", "--state", &state, "--flavors", &flavors, "--flavor", "m.1n", "--json"]);
    // Single-node VMs: node capacities 2, 1, 0 and 4, plus the star's 14.
    assert_eq!(json(&out)["total"], 7 + 14);
}

#[test]
fn cluster_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let flavors = write(dir.path(), "flavors.json", FLAVORS);
    let good = write(
        dir.path(),
        "good.json",
        r#"{"servers": [{"id": "s", "components": [{"topology": "c4", "capacities": [1, 1, 1, 1]}]}]}"#,
    );

    let out = numacap(&["cluster", "--state", &good, "--flavors", &flavors, "--flavor", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown flavor"));

    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"servers": [{"id": "s", "components": [{"topology": "c4", "capacities": [1, 1, 1]}]}]}"#,
    );
    let out = numacap(&["cluster", "--state", &bad, "--flavors", &flavors, "--flavor", "m.2n"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("servers[0].components[0]"), "{}", stderr(&out));

    let typo = write(dir.path(), "typo.json", r#"{"server": []}"#);
    let out = numacap(&["cluster", "--state", &typo, "--flavors", &flavors, "--flavor", "m.2n"]);
    assert_eq!(out.status.code(), Some(2));

    let missing = write(
        dir.path(),
        "missing.json",
        r#"{"servers": [
            {"id": "ok", "components": [{"topology": "c4", "capacities": [1, 1, 1, 1]}]},
            {"id": "no-mem", "components": [{"topology": "k2", "nodes": [{"cpu": 8}, {"cpu": 8}]}]}
        ]}"#,
    );
    let out = numacap(&["cluster", "--state", &missing, "--flavors", &flavors, "--flavor", "m.2n", "--json"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["total"], 2);
    assert!(v["servers"][1]["error"].as_str().unwrap().contains("mem"));
}
