//! Exit-code contracts, document round-trips, and corpus runner behavior,
//! exercised through the real binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_betti")
}

fn corpus_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("spawn betti")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn betti")
}

#[test]
fn tower_happy_path_exits_zero() {
    let out = tempfile::tempdir().unwrap();
    let o = run(&[
        "tower",
        "--input",
        corpus_path("circle.json").to_str().unwrap(),
        "--prime",
        "2",
        "--levels",
        "5",
        "--fields",
        "both",
        "--out",
        out.path().to_str().unwrap(),
        "--no-cache",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.path().join("circle.csv").exists());
    assert!(out.path().join("circle.report.json").exists());
    let csv = std::fs::read_to_string(out.path().join("circle.csv")).unwrap();
    assert!(csv.starts_with("k,i,index,b_Q,b_Fp,coker_Q,coker_Fp\n"));
}

#[test]
fn missing_prime_is_usage_error() {
    let o = run(&[
        "tower",
        "--input",
        corpus_path("circle.json").to_str().unwrap(),
        "--levels",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert!(stderr.contains("--prime"), "usage text names the flag: {stderr}");
}

#[test]
fn composite_prime_is_input_error() {
    let o = run(&[
        "tower",
        "--input",
        corpus_path("circle.json").to_str().unwrap(),
        "--prime",
        "4",
        "--levels",
        "2",
        "--no-cache",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not prime"));
    let o = run(&[
        "tower",
        "--input",
        corpus_path("circle.json").to_str().unwrap(),
        "--prime",
        "2",
        "--levels",
        "0",
        "--no-cache",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn conflicting_prime_is_input_error() {
    // document that pins p = 2 but flag says 3
    let dir = tempfile::tempdir().unwrap();
    let doc = r#"{
        "generators": ["a"], "relators": [],
        "rep": {"p": 2, "n": 2, "images": [[[1,1],[0,1]]], "max_level": 3}
    }"#;
    let path = dir.path().join("pinned.json");
    std::fs::write(&path, doc).unwrap();
    let o = run(&[
        "tower",
        "--input",
        path.to_str().unwrap(),
        "--prime",
        "3",
        "--levels",
        "2",
        "--out",
        dir.path().to_str().unwrap(),
        "--no-cache",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn budget_error_exits_three() {
    let out = tempfile::tempdir().unwrap();
    let o = run(&[
        "harris",
        "--input",
        corpus_path("harris_x1sq.json").to_str().unwrap(),
        "--levels",
        "6",
        "--truncation-cap",
        "10",
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn corpus_empty_manifest_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("empty.json");
    std::fs::write(&manifest, r#"{"cases": []}"#).unwrap();
    let o = run(&[
        "corpus",
        "--manifest",
        manifest.to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
        "--no-cache",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("out/corpus_report.json").exists());
}

#[test]
fn corpus_wrong_expectation_exits_one_with_diff() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(corpus_path("circle.json"), dir.path().join("circle.json")).unwrap();
    let manifest = dir.path().join("manifest.json");
    std::fs::write(
        &manifest,
        r#"{"cases": [{
            "name": "circle", "kind": "tower", "input": "circle.json",
            "prime": 2, "levels": 3,
            "expect": {"columns.b_fp_1": [9, 9, 9]}
        }]}"#,
    )
    .unwrap();
    let o = run(&[
        "corpus",
        "--manifest",
        manifest.to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
        "--no-cache",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("FAIL"));
    assert!(
        stdout.contains("expected [9,9,9]"),
        "diff names expected vs got: {stdout}"
    );
    assert!(stdout.contains("got [1,1,1]"), "{stdout}");
}

#[test]
fn corpus_case_error_does_not_abort_the_run() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(corpus_path("circle.json"), dir.path().join("circle.json")).unwrap();
    let manifest = dir.path().join("manifest.json");
    std::fs::write(
        &manifest,
        r#"{"cases": [
            {"name": "broken", "kind": "tower", "input": "missing.json",
             "prime": 2, "levels": 1, "expect": {}},
            {"name": "circle", "kind": "tower", "input": "circle.json",
             "prime": 2, "levels": 2,
             "expect": {"columns.b_fp_1": [1, 1]}}
        ]}"#,
    )
    .unwrap();
    let o = run(&[
        "corpus",
        "--manifest",
        manifest.to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
        "--no-cache",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&o.stdout);
    // the failing case is reported, the healthy one still ran and passed
    assert!(stdout.contains("broken"));
    assert!(stdout.lines().any(|l| l.starts_with("circle") && l.contains("PASS")));
}

#[test]
fn rank_subcommand_fields_and_snf() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(
        &path,
        r#"{"rows": 2, "cols": 2, "entries": [[2, 0], [0, 3]]}"#,
    )
    .unwrap();
    let o = run(&[
        "rank",
        "--input",
        path.to_str().unwrap(),
        "--field",
        "q",
        "--snf",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("rank = 2"));
    assert!(stdout.contains("snf = [1, 6]"));
    // mod 2 the matrix drops rank
    let o = run(&[
        "rank",
        "--input",
        path.to_str().unwrap(),
        "--field",
        "fp",
        "--prime",
        "2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(String::from_utf8_lossy(&o.stdout).contains("rank = 1"));
    // triple-format input
    let tri = dir.path().join("m.triples");
    std::fs::write(&tri, "2 3\n0 0 5\n1 2 -1\n").unwrap();
    let o = run(&[
        "rank",
        "--input",
        tri.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(String::from_utf8_lossy(&o.stdout).contains("rank = 2"));
}

#[test]
fn rank_laurent_via_cli() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hopf_row.json");
    std::fs::write(
        &path,
        r#"{"rows": 1, "cols": 2, "num_vars": 2,
            "laurent_entries": [[[[1, [0, 0]], [-1, [0, 1]]], [[1, [1, 0]], [-1, [0, 0]]]]]}"#,
    )
    .unwrap();
    let o = run(&[
        "rank",
        "--input",
        path.to_str().unwrap(),
        "--field",
        "laurent",
        "--prime",
        "5",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("rank = 1"));
}

#[test]
fn alexander_missing_prime_is_usage_error() {
    let o = run(&[
        "alexander",
        "--input",
        corpus_path("trefoil.json").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cache_info_and_clear() {
    let dir = tempfile::tempdir().unwrap();
    // warm the cache with a tower run
    let o = run_in(
        dir.path(),
        &[
            "tower",
            "--input",
            corpus_path("circle.json").to_str().unwrap(),
            "--prime",
            "2",
            "--levels",
            "3",
            "--out",
            dir.path().to_str().unwrap(),
            "--cache-dir",
            dir.path().join("cache").to_str().unwrap(),
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let o = run(&[
        "cache",
        "info",
        "--dir",
        dir.path().join("cache").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("entries: 3"), "{stdout}");
    let o = run(&[
        "cache",
        "clear",
        "--dir",
        dir.path().join("cache").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&[
        "cache",
        "info",
        "--dir",
        dir.path().join("cache").to_str().unwrap(),
    ]);
    assert!(String::from_utf8_lossy(&o.stdout).contains("entries: 0"));
}

#[test]
fn betti_cache_env_var_sets_the_default_dir() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("envcache");
    let o = Command::new(bin())
        .env("BETTI_CACHE", &cache)
        .args([
            "tower",
            "--input",
            corpus_path("circle.json").to_str().unwrap(),
            "--prime",
            "2",
            "--levels",
            "2",
            "--out",
            dir.path().to_str().unwrap(),
        ])
        .output()
        .expect("spawn betti");
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(cache.join("v1").is_dir(), "cache created at $BETTI_CACHE");
}

#[test]
fn corpus_inputs_roundtrip() {
    // every shipped input parses, validates, and re-serializes to a
    // semantically identical document
    use betti_core::io::{GroupDoc, LinkDoc, ModuleDoc};
    for name in ["circle.json", "wedge.json", "torus.json", "heisenberg.json"] {
        let text = std::fs::read_to_string(corpus_path(name)).unwrap();
        let doc: GroupDoc = serde_json::from_str(&text).unwrap();
        doc.presentation().unwrap();
        let again: GroupDoc =
            serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
        assert_eq!(doc, again, "{name}");
        let v1: serde_json::Value = serde_json::from_str(&text).unwrap();
        let v2: serde_json::Value =
            serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
        assert_eq!(v1, v2, "{name} loses fields in round-trip");
    }
    for name in [
        "trefoil.json",
        "hopf.json",
        "unlink2.json",
        "torus24_braid.json",
        "trefoil_braid.json",
        "figure8_braid.json",
    ] {
        let text = std::fs::read_to_string(corpus_path(name)).unwrap();
        let doc: LinkDoc = serde_json::from_str(&text).unwrap();
        doc.resolve().unwrap();
        let again: LinkDoc =
            serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
        assert_eq!(doc, again, "{name}");
    }
    for name in ["cyclic_x.json", "harris_x1sq.json", "free_rank1.json"] {
        let text = std::fs::read_to_string(corpus_path(name)).unwrap();
        let doc: ModuleDoc = serde_json::from_str(&text).unwrap();
        doc.module().unwrap();
        let again: ModuleDoc =
            serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
        assert_eq!(doc, again, "{name}");
    }
}
