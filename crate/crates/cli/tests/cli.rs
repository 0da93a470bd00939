use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ent_evolve::network::{evaluate, NetworkFile};
use serde_json::{json, Value};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    run_with_env(args, &[])
}

fn run_with_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ent-evolve"));
    cmd.args(args).env_remove("ENT_EVOLVE_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn complex(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn snake_chain_collapses_to_identity() {
    let file = data("snake.json");
    let out = json_of(&run(&["rewrite", file.to_str().unwrap()]));
    let nodes = out["network"]["nodes"].as_array().unwrap();
    assert_eq!(nodes.len(), 1);
    assert_eq!(out["events"][0]["rule"], "snake");
    assert_eq!(out["events"][0]["before"], out["events"][0]["after"]);

    let contracted = json_of(&run(&["contract", file.to_str().unwrap()]));
    assert_eq!(contracted["tensor"]["dims"], json!([2]));
    assert_eq!(contracted["tensor"]["variance"], json!(["down"]));
    let entries: Vec<_> = contracted["tensor"]["data"].as_array().unwrap().iter().map(complex).collect();
    assert_eq!(entries, vec![(1.0, 0.0), (2.0, -1.0)]);
}

fn gamma_network() -> Value {
    // Triangle of three dense nodes, one open leg each.
    let entries = |n: usize, seed: f64| -> Vec<[f64; 2]> {
        (0..n).map(|k| [((k as f64 + seed) * 0.37).sin(), ((k as f64) * seed * 0.11).cos()]).collect()
    };
    json!({
        "nodes": [
            {"id": 0, "kind": "dense", "dims": [2, 3, 2], "variance": ["down", "up", "down"], "data": entries(12, 1.0)},
            {"id": 1, "kind": "dense", "dims": [2, 4, 3], "variance": ["up", "down", "up"], "data": entries(24, 2.0)},
            {"id": 2, "kind": "dense", "dims": [4, 3, 2], "variance": ["up", "down", "up"], "data": entries(24, 3.0)}
        ],
        "edges": [[[0, 0], [1, 0]], [[1, 1], [2, 0]], [[2, 1], [0, 1]]],
        "open": [[2, 2], [0, 2], [1, 2]]
    })
}

#[test]
fn contract_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gamma.json");
    let net = gamma_network();
    std::fs::write(&path, net.to_string()).unwrap();
    let g = serde_json::from_value::<NetworkFile>(net).unwrap().into_graph().unwrap();
    let expected = evaluate(&g, None).unwrap();
    for plan in ["greedy", "exhaustive"] {
        let out = json_of(&run(&["contract", path.to_str().unwrap(), "--plan", plan, "--stats"]));
        assert_eq!(out["tensor"]["dims"], json!(expected.dims()));
        assert_eq!(out["tensor"]["variance"], json!(["up", "down", "up"]));
        assert_eq!(out["stats"]["plan"], plan);
        assert_eq!(out["stats"]["contractions"], 2);
        for (got, want) in out["tensor"]["data"].as_array().unwrap().iter().zip(expected.data()) {
            let (re, im) = complex(got);
            assert!((re - want.re).abs() + (im - want.im).abs() < 1e-12);
        }
    }
}

#[test]
fn malformed_json_is_a_usage_error() {
    let out = run(&["contract", data("malformed.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn missing_file_is_a_usage_error() {
    let out = run(&["gconc", data("does-not-exist.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dimension_mismatch_is_a_semantic_error() {
    let out = run(&["contract", data("mismatch.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());
}

#[test]
fn gconc_on_bell_and_product() {
    let bell = json_of(&run(&["gconc", data("bell.json").to_str().unwrap()]));
    assert!((bell["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(bell["exactness"], "exact");
    let product = json_of(&run(&["gconc", data("product.json").to_str().unwrap()]));
    assert_eq!(product["value"].as_f64(), Some(0.0));
}

#[test]
fn choi_of_identity_is_bell_projector() {
    let out = json_of(&run(&["choi", data("identity.json").to_str().unwrap()]));
    assert_eq!(out["dims"], json!([4, 4]));
    let rows = out["matrix"].as_array().unwrap();
    for (i, row) in rows.iter().enumerate() {
        for (j, z) in row.as_array().unwrap().iter().enumerate() {
            let want = if [0, 3].contains(&i) && [0, 3].contains(&j) { 0.5 } else { 0.0 };
            let (re, im) = complex(z);
            assert!((re - want).abs() < 1e-15 && im.abs() < 1e-15, "({i},{j})");
        }
    }
}

#[test]
fn verify_campaigns_pass() {
    for (check, trials) in [("factorization", "100"), ("upper-bound", "200")] {
        let out = run(&["verify", check, "--dim", "2", "--trials", trials, "--seed", "7"]);
        let report = json_of(&out);
        assert_eq!(report["check"], check);
        assert_eq!(report["pass"], true);
        assert_eq!(report["seed"], 7);
    }
}

#[test]
fn verify_rejects_bad_arguments() {
    let cases: [&[&str]; 5] = [
        &["verify", "factorization", "--trials", "0", "--seed", "1"],
        &["verify", "nonsense", "--seed", "1"],
        &["verify", "factorization"],
        &["verify", "upper-bound", "--dim", "3", "--seed", "1"],
        &["verify", "lemma", "--mode", "sampled-upper-bound", "--seed", "1"],
    ];
    for args in cases {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn failing_tolerance_exits_one() {
    let out = run(&["verify", "lemma", "--dim", "3", "--trials", "5", "--seed", "1", "--tolerance", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of_any(&out)["pass"], false);
}

fn json_of_any(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn verify_output_is_byte_identical() {
    let args = ["verify", "sl-invariance", "--dim", "2", "--trials", "50", "--seed", "11"];
    let first = run(&args);
    let again = run(&args);
    let one = run_with_env(&args, &[("ENT_EVOLVE_THREADS", "1")]);
    let four = run_with_env(&args, &[("ENT_EVOLVE_THREADS", "4")]);
    assert!(first.status.success());
    assert_eq!(first.stdout, again.stdout);
    assert_eq!(first.stdout, one.stdout);
    assert_eq!(first.stdout, four.stdout);

    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, threads) in [(&a, "1"), (&b, "4")] {
        let out = run_with_env(
            &[
                "verify",
                "factorization",
                "--trials",
                "30",
                "--seed",
                "3",
                "--format",
                "csv",
                "--out",
                path.to_str().unwrap(),
            ],
            &[("ENT_EVOLVE_THREADS", threads)],
        );
        assert!(out.status.success());
    }
    let csv = std::fs::read(&a).unwrap();
    assert_eq!(csv, std::fs::read(&b).unwrap());
    assert!(csv.starts_with(b"check,mode,seed,trial,residual,pass\n"));
}

#[test]
fn bad_thread_count_is_rejected() {
    let out = run_with_env(&["verify", "choi", "--seed", "1"], &[("ENT_EVOLVE_THREADS", "zero")]);
    assert_eq!(out.status.code(), Some(2));
}
