// SPDX-License-Identifier: Apache-2.0

//! End-to-end runs of the `riglab` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use riglab_core::harness::CSV_HEADER;

fn riglab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_riglab"))
        .args(args)
        .env_remove("RIGLAB_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(out)).expect("valid JSON")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = riglab(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn runtime_errors_exit_one() {
    let out = riglab(&[
        "generate", "--model", "uniform", "-n", "5", "-P", "3", "-K", "4",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn threshold_reports_deviation_and_critical_set_size() {
    let v = json(&riglab(&[
        "threshold",
        "--model",
        "uniform",
        "-n",
        "2000",
        "-P",
        "20000",
        "-K",
        "10",
        "-k",
        "2",
    ]));
    assert!((v["alpha_n"].as_f64().unwrap() - 0.371).abs() < 5e-4);
    assert_eq!(v["critical_param"]["value"].as_f64(), Some(10.0));
}

#[test]
fn generate_then_check_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let graph = path(dir.path(), "g.txt");
    let assignment = path(dir.path(), "a.json");
    let args = [
        "generate", "--model", "uniform", "-n", "12", "-P", "30", "-K", "6", "--seed", "4",
    ];
    let first = stdout(&riglab(&args));
    assert_eq!(first, stdout(&riglab(&args)));
    let mut with_files = args.to_vec();
    with_files.extend(["--out", &graph, "--assignment-out", &assignment]);
    stdout(&riglab(&with_files));
    assert_eq!(fs::read_to_string(&graph).unwrap(), first);

    let from_graph = json(&riglab(&[
        "check",
        "--graph",
        &graph,
        "--property",
        "connectivity",
        "-k",
        "1",
    ]));
    let from_sets = json(&riglab(&[
        "check",
        "--assignment",
        &assignment,
        "--property",
        "connectivity",
        "-k",
        "1",
    ]));
    assert_eq!(from_graph["holds"], from_sets["holds"]);
    assert!(from_graph["holds"].is_boolean());

    let exact = json(&riglab(&[
        "check",
        "--graph",
        &graph,
        "--property",
        "robustness",
        "-k",
        "2",
    ]));
    if exact["holds"] == false {
        assert!(exact["witness"].is_object());
    }
}

#[test]
fn fig1_writes_the_fixed_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "d.csv");
    stdout(&riglab(&["fig1", "--trials", "2", "--out", &out]));
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    assert_eq!(lines.count(), 16 * 2 * 3);
}

#[test]
fn sweep_output_ignores_thread_count() {
    let run = |threads: &str| {
        stdout(&riglab(&[
            "--threads",
            threads,
            "sweep",
            "--preset",
            "small_uniform",
            "--trials",
            "25",
        ]))
    };
    let one = run("1");
    assert_eq!(one, run("3"));
    assert!(one.starts_with(CSV_HEADER));
}

#[test]
fn sweep_from_json_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = path(dir.path(), "cfg.json");
    fs::write(
        &cfg,
        r#"{"model": "binomial", "n": 10, "P": 50, "grid": [0.05, 0.2],
            "k": [1], "properties": ["connectivity", "robustness"], "trials": 40, "seed": 3}"#,
    )
    .unwrap();
    let text = stdout(&riglab(&["sweep", "--config", &cfg]));
    assert_eq!(text.lines().count(), 1 + 2 * 2);
    let bad = path(dir.path(), "bad.json");
    fs::write(&bad, r#"{"model": "binomial", "n": 10, "P": 50, "grid": [], "k": [1], "properties": ["connectivity"]}"#).unwrap();
    assert_eq!(riglab(&["sweep", "--config", &bad]).status.code(), Some(1));
}

#[test]
fn consensus_trace_from_a_file_and_from_a_model() {
    let dir = tempfile::tempdir().unwrap();
    let graph = path(dir.path(), "g.txt");
    stdout(&riglab(&[
        "generate", "--model", "er", "-n", "10", "-p", "0.9", "--seed", "2", "--out", &graph,
    ]));
    let trace = stdout(&riglab(&[
        "consensus",
        "--graph",
        &graph,
        "--h",
        "1",
        "--adversaries",
        "0",
        "--strategy",
        "max_push",
    ]));
    let mut lines = trace.lines();
    assert_eq!(lines.next(), Some("round,spread,min,max"));
    assert!(lines.count() >= 1);

    let v = json(&riglab(&[
        "--format",
        "json",
        "consensus",
        "--model",
        "er",
        "-n",
        "10",
        "-p",
        "0.9",
    ]));
    assert_eq!(v["converged"], true);
    assert_eq!(v["safety_holds"], true);

    let both = riglab(&[
        "consensus",
        "--graph",
        &graph,
        "--model",
        "er",
        "-n",
        "10",
        "-p",
        "0.5",
    ]);
    assert_eq!(both.status.code(), Some(2));
}

#[test]
fn couple_reports_parameters() {
    let v = json(&riglab(&[
        "couple", "bracket", "-n", "137", "-P", "10000", "-p", "0.02",
    ]));
    assert!(v["k_minus"].as_u64().unwrap() <= v["k_plus"].as_u64().unwrap());
    let v = json(&riglab(&[
        "couple", "uniform", "-n", "20", "-P", "50", "--k1", "3", "--k2", "7", "--verify", "50",
    ]));
    assert_eq!(v["holds"], 50);
    assert_eq!(v["rate"], 1.0);
}
