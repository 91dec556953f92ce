//! Golden-file tests for `palg`. Run with `UPDATE_GOLDEN=1` to rewrite the files.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn palg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_palg")).args(args).output().expect("palg runs")
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

const CASES: &[(&str, &[&str])] = &[
    ("trees_example", &["trees", "--example", "example-graph", "--enumerate"]),
    ("trees_k4", &["trees", "--complete", "3", "--format", "json"]),
    ("parking_g_example", &["parking", "g", "--example", "example-graph", "--enumerate"]),
    ("parking_rho_421", &["parking", "rho", "--rho", "4,2,1", "--format", "json"]),
    ("parking_kl_212", &["parking", "kl", "--kl", "2,1,2", "--format", "csv"]),
    ("parking_almost_k4", &["parking", "almost", "--complete", "3"]),
    ("hilbert_example", &["hilbert", "both", "--example", "example-graph", "--format", "json"]),
    ("hilbert_rho_643", &["hilbert", "both", "--rho", "6,4,3", "--format", "csv"]),
    ("hilbert_rho_9631", &["hilbert", "both", "--rho", "9,6,3,1"]),
    ("hilbert_hat_k4", &["hilbert", "both", "--hat", "3"]),
    ("resolution_k4", &["resolution", "both", "--complete", "3"]),
    ("resolution_res2", &["resolution", "order", "--example", "res2", "--format", "json"]),
    ("resolution_res3", &["resolution", "both", "--example", "res3"]),
    ("resolution_res4", &["resolution", "both", "--example", "res4", "--format", "csv"]),
    ("sandpile_duality", &["sandpile", "duality", "--example", "example-graph", "--format", "json"]),
    ("sandpile_group_k4", &["sandpile", "group", "--complete", "3"]),
    ("sandpile_recurrent", &["sandpile", "recurrent", "--example", "example-graph", "--enumerate"]),
    ("sandpile_stabilize", &["sandpile", "stabilize", "--example", "example-graph", "--config", "5,0,7"]),
    ("search_rho_3", &["search-rho", "--n", "3", "--max-value", "4", "--format", "csv"]),
];

fn extension(args: &[&str]) -> &'static str {
    match args.windows(2).find(|w| w[0] == "--format").map(|w| w[1]) {
        Some("json") => "json",
        Some("csv") => "csv",
        _ => "txt",
    }
}

#[test]
fn golden_outputs() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut mismatches = Vec::new();
    for (name, args) in CASES {
        let out = palg(args);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        let path = golden_dir().join(format!("{name}.{}", extension(args)));
        if update {
            fs::write(&path, &out.stdout).unwrap();
            continue;
        }
        let expected = fs::read(&path).unwrap_or_else(|_| panic!("missing {}; run with UPDATE_GOLDEN=1", path.display()));
        if expected != out.stdout {
            mismatches.push(name.to_string());
        }
    }
    assert!(mismatches.is_empty(), "outputs differ from golden files: {mismatches:?}");
}

#[test]
fn pinned_values() {
    let text = |args: &[&str]| String::from_utf8(palg(args).stdout).unwrap();
    assert!(text(&["trees", "--example", "example-graph"]).contains("external activity: 0:4 1:3 2:1"));
    assert!(text(&["trees", "--complete", "3"]).contains("spanning trees: 16"));
    assert!(text(&["parking", "rho", "--rho", "4,2,1"]).contains("count: 25"));
    assert!(text(&["parking", "kl", "--kl", "2,1,2"]).contains("count: 8"));
    assert!(text(&["hilbert", "both", "--example", "example-graph"]).contains("Hilb B: 1+3q+4q^2"));
    let k4 = text(&["resolution", "order", "--complete", "3"]);
    assert!(k4.contains("0 → S(-6)^6 → S(-5)^12 → S(-3)^4 ⊕ S(-4)^3 → S"));
    let res3 = text(&["resolution", "both", "--example", "res3"]);
    assert!(res3.contains("disconnected") && res3.contains("not a resolution"));
    let res4 = text(&["resolution", "both", "--example", "res4"]);
    assert!(res4.contains("not minimal"));
    assert!(res4.contains("minimal Betti numbers: 0 → S(-5)^4 → S(-4)^9 → S(-2)^2 ⊕ S(-3)^4 → S"));
    assert!(text(&["sandpile", "group", "--complete", "3"]).contains("Z/4 ⊕ Z/4"));
}

#[test]
fn json_output_has_manifest() {
    let out = palg(&["parking", "g", "--complete", "2", "--format", "json", "--seed", "5"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["manifest"]["command"], "parking g");
    assert_eq!(v["manifest"]["seed"], 5);
    assert_eq!(v["manifest"]["input_digest"].as_str().unwrap().len(), 64);
    assert_eq!(v["result"]["count"], 3);
}

#[test]
fn identical_runs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("family.json");
    fs::write(&path, r#"{"n": 2, "generators": [{"label": [1], "exponents": [3, 0]}, {"label": [2], "exponents": [0, 2]}, {"label": [1, 2], "exponents": [2, 1]}]}"#).unwrap();
    let p = path.to_str().unwrap();
    let args = ["hilbert", "both", "--family", p, "--seed", "11", "--format", "json"];
    let a = palg(&args);
    let b = palg(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn input_formats_share_a_digest() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("edges.json");
    fs::write(&edges, r#"{"edges": [[0,1],[0,3],[1,2],[1,3],[2,3]]}"#).unwrap();
    let from_file = palg(&["trees", "--graph", edges.to_str().unwrap(), "--format", "json"]);
    let named = palg(&["trees", "--example", "example-graph", "--format", "json"]);
    assert_eq!(from_file.stdout, named.stdout);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "[[1,-2],[-2,1]]").unwrap();
    let out = palg(&["sandpile", "validate", "--matrix", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("principal minor on sites [1, 2]"));

    assert_eq!(palg(&["trees", "--complete", "8"]).status.code(), Some(3));
    assert_eq!(palg(&["parking", "rho", "--complete", "2"]).status.code(), Some(2));
    assert_eq!(palg(&["trees"]).status.code(), Some(2));

    let open = dir.path().join("open.json");
    fs::write(&open, r#"{"n": 2, "generators": [{"label": [1], "exponents": [1, 0]}]}"#).unwrap();
    assert_eq!(palg(&["hilbert", "a", "--family", open.to_str().unwrap()]).status.code(), Some(2));
    let capped = palg(&["hilbert", "a", "--family", open.to_str().unwrap(), "--cap", "3", "--format", "csv"]);
    assert!(capped.status.success());
    assert_eq!(String::from_utf8(capped.stdout).unwrap(), "degree,dim_a,dim_b\n0,1,\n1,1,\n2,1,\n3,1,\n");
}

#[test]
fn guard_override_is_recorded() {
    let out = palg(&["trees", "--complete", "2", "--guard-override", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["manifest"]["guards"], "override");
    assert!(String::from_utf8_lossy(&out.stderr).contains("--guard-override"));
}
