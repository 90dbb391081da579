use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liar-arena"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn play_json(args: &[&str]) -> Value {
    let o = run(&[&["play"], args].concat());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(stdout(&o).trim()).unwrap()
}

#[test]
fn play_prints_a_verified_record() {
    let v = play_json(&[
        "--solver", "pair-and-conquer", "--adversary", "topbottom", "--claim1", "on",
        "--n", "4", "--k", "1", "--kind", "maxmin", "--seed", "0",
    ]);
    for field in ["n", "k", "kind", "solver", "adversary", "queries", "verified", "forfeit"] {
        assert!(v.get(field).is_some(), "missing {field}: {v}");
    }
    assert_eq!(v["kind"], "maxmin");
    assert_eq!(v["verified"], true);
    assert_eq!(v["forfeit"], false);
    assert_eq!(v["adversary"], "topbottom+claim1");
    assert!(v["queries"].as_u64().unwrap() >= 7);
}

#[test]
fn play_max_game_meets_the_bound() {
    let v = play_json(&[
        "--solver", "tournament-max", "--adversary", "consistent", "--claim1", "on",
        "--n", "5", "--k", "2", "--kind", "max",
    ]);
    assert!(v["queries"].as_u64().unwrap() >= 14);
    assert_eq!(v["verified"], true);
}

#[test]
fn play_dumps_graph_and_transcript() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    let transcript = dir.path().join("t.txt");
    let v = play_json(&[
        "--solver", "naive-maxmin", "--adversary", "truthful", "--n", "4", "--k", "0",
        "--kind", "maxmin", "--seed", "3",
        "--dump-graph", graph.to_str().unwrap(),
        "--dump-transcript", transcript.to_str().unwrap(),
    ]);
    let queries = v["queries"].as_u64().unwrap() as usize;
    let t = fs::read_to_string(&transcript).unwrap();
    assert_eq!(t.lines().count(), queries);
    for line in t.lines() {
        let f: Vec<usize> = line.split_whitespace().map(|x| x.parse().unwrap()).collect();
        assert_eq!(f.len(), 3);
        assert!(f[2] == f[0] || f[2] == f[1]);
    }
    let g = fs::read_to_string(&graph).unwrap();
    let total: usize = g
        .lines()
        .map(|l| l.rsplit_once(" x").unwrap().1.parse::<usize>().unwrap())
        .sum();
    assert_eq!(total, queries);
}

#[test]
fn exact_prints_the_value() {
    let o = run(&["exact", "--n", "3", "--k", "1", "--kind", "max"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "5");

    let o = run(&["exact", "--table", "--n-max", "3", "--k-max", "1"]);
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("n,k,kind,value"));
    assert!(out.lines().any(|l| l == "3,0,maxmin,3"));
}

#[test]
fn exact_outside_guard_is_a_config_error() {
    let o = run(&["exact", "--n", "7", "--k", "0", "--kind", "max"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bounds_table_has_the_expected_header() {
    let o = run(&["bounds", "--table", "--n-max", "6", "--k-max", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("n,k,pohl,rgl_max,thm1_lower,identity_ok"));
    assert_eq!(lines.count(), 5 * 3);
    assert!(out.contains("\n4,1,4,7,7,true\n"));
}

#[test]
fn sweep_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let sweep = |name: &str, format: &str| {
        let path = dir.path().join(name);
        let o = run(&[
            "sweep", "--n-min", "2", "--n-max", "5", "--k-min", "0", "--k-max", "2",
            "--solvers", "naive-maxmin,pair-and-conquer,random",
            "--adversaries", "truthful,topbottom,topbottom+claim1",
            "--kind", "maxmin", "--seed", "7", "--format", format,
            "--output", path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        fs::read(path).unwrap()
    };
    let a = sweep("a.csv", "csv");
    let b = sweep("b.csv", "csv");
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().count(), 1 + 4 * 3 * 3 * 3);
    assert!(text.starts_with("n,k,solver,adversary,kind,queries,verified\n"));

    let json: Value = serde_json::from_slice(&sweep("c.json", "json")).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 4 * 3 * 3 * 3);
}

#[test]
fn sweep_rejects_unsupported_solver() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "sweep", "--n-max", "3", "--k-max", "0", "--solvers", "tournament-max",
        "--adversaries", "truthful", "--kind", "maxmin",
        "--output", dir.path().join("x.csv").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_bounds_passes() {
    let o = run(&["verify-bounds", "--exact", "--kind", "maxmin", "--n-max", "4", "--k-max", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("exact n=4 k=1 kind=maxmin value=8"));

    let o = run(&[
        "verify-bounds", "--adversary", "--kind", "max", "--n-max", "5", "--k", "1", "--trials", "20",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("violations=0"));
}

#[test]
fn invalid_configuration_exits_with_two() {
    let o = run(&["play", "--solver", "tournament-max", "--adversary", "truthful", "--n", "0", "--k", "0", "--kind", "max"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["play", "--solver", "tournament-max", "--adversary", "truthful", "--n", "3", "--k", "0", "--kind", "maxmin"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["play", "--solver", "nope", "--adversary", "truthful", "--n", "3", "--k", "0", "--kind", "max"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn thread_variable_is_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_liar-arena"))
        .args(["bounds", "--table", "--n-max", "3"])
        .env("LIAR_ARENA_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_liar-arena"))
        .args(["exact", "--n", "4", "--k", "1", "--kind", "maxmin"])
        .env("LIAR_ARENA_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(stdout(&o).trim(), "8");
}
