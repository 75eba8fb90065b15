use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lyapcheck_core::consensus::equal_neighbor_matrix;
use lyapcheck_core::interchange::mat_to_json;
use lyapcheck_core::lyapunov::{counterexample, variance_matrix};
use lyapcheck_core::random::birkhoff_mixture;
use lyapcheck_core::{Graph, Mat, Rat};
use rand::SeedableRng;
use serde_json::{json, Value};
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lyapcheck")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, serde_json::to_string_pretty(v).unwrap()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn doubly_stochastic(count: usize) -> Value {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    Value::Array((0..count).map(|_| mat_to_json(&birkhoff_mixture(5, 4, &mut rng))).collect())
}

#[test]
fn counterexample_transcript() {
    let dir = TempDir::new().unwrap();
    let t = dir.path().join("proof.txt");
    let out = run(&["counterexample", "--n", "8", "--transcript", s(&t)]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&t).unwrap();
    assert!(text.contains("V(x) = 80"));
    assert!(text.contains("V(y) = 258167/3200"));
    assert_eq!(String::from_utf8_lossy(&out.stdout), text);
}

#[test]
fn counterexample_below_eight_is_input_error() {
    let out = run(&["counterexample", "--n", "7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n >= 8"));
}

#[test]
fn check_lyapunov_exit_codes() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "c5.json", &mat_to_json(&variance_matrix::<Rat>(5)));
    let set = write(&dir, "set.json", &doubly_stochastic(10));
    let out = run(&["check-lyapunov", "--matrix", s(&c), "--against", s(&set)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["report"]["member"], json!(true));

    let c8 = write(&dir, "c8.json", &mat_to_json(&variance_matrix::<Rat>(8)));
    let a = write(&dir, "a.json", &json!([mat_to_json(&counterexample(8).unwrap().a)]));
    let out = run(&["check-lyapunov", "--matrix", s(&c8), "--against", s(&a)]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["report"]["condition_b"][0]["passed"], json!(false));

    // float input takes the tolerance-based path
    let approx = write(&dir, "approx.json", &json!([[0.5, -0.5], [-0.5, 0.5]]));
    let swap = write(&dir, "swap.json", &json!([[[0.0, 1.0], [1.0, 0.0]]]));
    let out = run(&["check-lyapunov", "--matrix", s(&approx), "--against", s(&swap)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["mode"], json!("approx"));
}

#[test]
fn malformed_json_reports_line() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "[\n  [\"1/2\", \"1/2\"],\n  [\"1/2\" \"1/2\"]\n]\n").unwrap();
    let out = run(&["check-lyapunov", "--matrix", s(&bad), "--against", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.json:3:"), "{err}");
    assert!(err.contains("[\"1/2\" \"1/2\"]"), "{err}");
}

#[test]
fn non_stochastic_input_is_rejected() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.json", &mat_to_json(&variance_matrix::<Rat>(2)));
    let bad = write(&dir, "bad.json", &json!([[["1", "1"], ["0", "1"]]]));
    let out = run(&["check-lyapunov", "--matrix", s(&m), "--against", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reproducible_output_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let set = write(&dir, "set.json", &doubly_stochastic(6));
    let args = ["--reproducible", "search", "--matrices", s(&set), "--seed", "4"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let report = stdout_json(&first);
    assert!(report.get("timestamp").is_none());
    assert_eq!(report["report"]["outcome"]["status"], json!("feasible"));
    assert_eq!(report["rational_certificate"]["exact_checks_passed"], json!(6));

    let stamped = stdout_json(&run(&["search", "--matrices", s(&set)]));
    assert!(stamped["timestamp"].is_u64());
}

#[test]
fn search_infeasible_exits_one_with_rational_witnesses() {
    let dir = TempDir::new().unwrap();
    let a = counterexample(8).unwrap().a;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let mut list = vec![mat_to_json(&a)];
    for _ in 0..50 {
        list.push(mat_to_json(&lyapcheck_core::Permutation::random(8, &mut rng).conjugate(&a)));
    }
    list.push(mat_to_json(&equal_neighbor_matrix::<Rat>(&Graph::complete(8))));
    let set = write(&dir, "set.json", &Value::Array(list));
    let out = run(&["--reproducible", "search", "--matrices", s(&set), "--stall", "50"]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    let outcome = &report["report"]["outcome"];
    assert_eq!(outcome["status"], json!("numerically_infeasible"));
    let x = &outcome["witnesses"][0]["x"];
    assert!(x[0].is_string());
}

#[test]
fn simulate_writes_csv() {
    let dir = TempDir::new().unwrap();
    let seq = write(
        &dir,
        "seq.json",
        &json!({"n": 3, "mode": "symmetric", "kind": "periodic", "graphs": [{"edges": [[0, 1]]}, {"edges": [[1, 2]]}]}),
    );
    let x0 = write(&dir, "x0.json", &json!(["1", "0", "0"]));
    let csv = dir.path().join("traj.csv");
    let out = run(&["--reproducible", "simulate", "--sequence", s(&seq), "--x0", s(&x0), "--steps", "4", "--csv", s(&csv)]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,x_1,x_2,x_3,span,variance"));
    assert_eq!(lines.next(), Some("0,1,0,0,1,2/3"));
    assert_eq!(lines.next(), Some("1,1/2,1/2,0,1/2,1/6"));
    assert_eq!(text.lines().count(), 6);
    assert_eq!(stdout_json(&out)["trajectory"]["steps"], json!(4));
}

#[test]
fn check_assumptions_pass_and_fail() {
    let dir = TempDir::new().unwrap();
    let alternating = write(
        &dir,
        "alt.json",
        &json!({"n": 3, "mode": "symmetric", "kind": "periodic", "graphs": [{"edges": [[0, 1]]}, {"edges": [[1, 2]]}]}),
    );
    let out = run(&["check-assumptions", "--sequence", s(&alternating), "--alpha", "1/2", "--B", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let split = write(&dir, "split.json", &json!({"n": 4, "mode": "symmetric", "kind": "constant", "graphs": [{"edges": [[0, 1], [2, 3]]}]}));
    let out = run(&["check-assumptions", "--sequence", s(&split), "--alpha", "1/2", "--B", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["assumption2"]["first_failure"], json!(0));
    let out = run(&["check-assumptions", "--sequence", s(&split), "--alpha", "0", "--B", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_sequence_field_is_input_error() {
    let dir = TempDir::new().unwrap();
    let seq = write(&dir, "seq.json", &json!({"n": 2, "mode": "symmetric", "kind": "constant", "graphs": [], "extra": 1}));
    let out = run(&["check-assumptions", "--sequence", s(&seq), "--alpha", "1/2", "--B", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn symmetrize_reports_proportionality() {
    let dir = TempDir::new().unwrap();
    let m = Mat::from_rows(vec![
        vec![Rat::new(2, 1), Rat::new(-1, 1), Rat::new(-1, 1)],
        vec![Rat::new(-1, 1), Rat::new(1, 1), Rat::new(0, 1)],
        vec![Rat::new(-1, 1), Rat::new(0, 1), Rat::new(1, 1)],
    ])
    .unwrap();
    let path = write(&dir, "m.json", &mat_to_json(&m));
    for extra in [None, Some("--closed-form")] {
        let mut args = vec!["symmetrize", "--matrix", s(&path)];
        args.extend(extra);
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0));
        let report = stdout_json(&out);
        assert_eq!(report["decomposition"]["status"], json!("proportional"));
        // tr M = 4 and the off-diagonal sum is −4, so Z has 2!·4 = 8 on the
        // diagonal, 1!·(−4) off it, and Z = 12·C
        assert_eq!(report["z"][0][0], json!("8"));
        assert_eq!(report["z"][0][1], json!("-4"));
        assert_eq!(report["decomposition"]["alpha"], json!("12"));
    }
}

#[test]
fn construct_pi_common_and_absent() {
    let dir = TempDir::new().unwrap();
    let star = mat_to_json(&equal_neighbor_matrix::<Rat>(&Graph::star(3)));
    let path = mat_to_json(&equal_neighbor_matrix::<Rat>(&Graph::path(3)));
    let both = write(&dir, "both.json", &json!([star, path]));
    let out = run(&["construct-pi", "--matrices", s(&both)]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert!(report["common_pi"].is_null());
    assert_eq!(report["individual_pi"][0], json!(["3/7", "2/7", "2/7"]));

    let single = write(&dir, "single.json", &json!({"matrices": [star]}));
    let out = run(&["construct-pi", "--matrices", s(&single)]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["common_pi"], json!(["3/7", "2/7", "2/7"]));
    assert_eq!(report["verification"]["rank"], json!(2));
}

#[test]
fn enumerate_streams_lines() {
    let out = run(&["enumerate", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<Value> =
        String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0]["matrix"].as_array().unwrap().len(), 3);
    let out = run(&["enumerate", "--n", "9", "--cap", "3", "--seed", "2"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 3);
    assert_eq!(run(&["enumerate", "--n", "9"]).status.code(), Some(2));
}

#[test]
fn verdict_paths() {
    let out = run(&["verdict", "--n", "8"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("V(x) = 80"));
    let out = run(&["--json", "--reproducible", "verdict", "--n", "9"]);
    assert_eq!(stdout_json(&out)["verdict"]["verdict"], json!("empty"));
    let out = run(&["--reproducible", "verdict", "--n", "4"]);
    let report = stdout_json(&out);
    assert_eq!(report["verdict"]["graphs_tested"], json!(38));
    assert_eq!(report["verdict"]["variance_survives"], json!(true));
    assert_eq!(run(&["verdict", "--n", "1"]).status.code(), Some(2));
}

#[test]
fn thread_variable_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_lyapcheck"))
        .args(["verdict", "--n", "3"])
        .env("LYAPCHECK_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_lyapcheck"))
        .args(["verdict", "--n", "3"])
        .env("LYAPCHECK_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
