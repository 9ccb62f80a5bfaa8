use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use knotfoam_cli::{Failure, OutputRecord, EXIT_INVARIANT};
use knotfoam_core::{Error, LeeError};

fn knotfoam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_knotfoam"))
        .args(args)
        .env_remove("KNOTFOAM_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn record(o: &Output) -> OutputRecord {
    assert_eq!(o.status.code(), Some(0), "{}", stderr(o));
    serde_json::from_str(&stdout(o)).unwrap()
}

#[test]
fn trefoil_record() {
    let o = knotfoam(&["invariants", "--braid", "1 1 1", "--strands", "2", "--format", "json"]);
    let r = record(&o);
    assert_eq!(r.invariants.lee_rank, Some(2));
    assert_eq!(r.invariants.s.map(i32::abs), Some(2));
    assert_eq!(r.invariants.slice_genus_lower_bound, Some(1));
    assert_eq!(r.invariants.jones, r.invariants.khovanov.euler_characteristic());
    assert_eq!(r.input.braid, Some(vec![1, 1, 1]));
    let again = serde_json::to_string_pretty(&r).unwrap() + "\n";
    assert_eq!(again, stdout(&o));
}

#[test]
fn empty_pd_is_the_unknot() {
    let r = record(&knotfoam(&["invariants", "--pd", "", "--format", "json"]));
    assert_eq!(r.invariants.jones.to_string(), "q + q^-1");
    assert_eq!(r.invariants.s, Some(0));
    assert_eq!(r.invariants.lee_rank, Some(2));
}

#[test]
fn links_have_no_s() {
    let r = record(&knotfoam(&["invariants", "--braid", "1 1", "--strands", "2", "--format", "json"]));
    assert_eq!(r.invariants.components, 2);
    assert_eq!(r.invariants.lee_rank, Some(4));
    assert_eq!(r.invariants.s, None);
    assert!(stdout(&knotfoam(&["invariants", "--braid", "1 1", "--strands", "2", "--format", "json"]))
        .contains("\"s\": null"));
}

#[test]
fn skip_flags() {
    let r = record(&knotfoam(&["invariants", "--braid", "1 1 1", "--strands", "2", "--format", "json", "--skip", "s"]));
    assert_eq!((r.invariants.lee_rank, r.invariants.s), (Some(2), None));
    let r = record(&knotfoam(&["invariants", "--braid", "1 1 1", "--strands", "2", "--format", "json", "--skip", "lee"]));
    assert_eq!((r.invariants.lee_rank, r.invariants.s), (None, None));
}

#[test]
fn table_format() {
    let o = knotfoam(&["invariants", "--pd", "X[1,4,2,5];X[3,6,4,1];X[5,2,6,3]"]);
    let text = stdout(&o);
    assert!(text.contains("jones       q^-1 + q^-3 + q^-5 - q^-9"), "{text}");
    assert!(text.contains("   -2    -7      0  Z/2"), "{text}");
    assert!(text.contains("s           -2"), "{text}");
}

#[test]
fn output_is_deterministic_across_threads() {
    let run = |t: &str| stdout(&knotfoam(&["invariants", "--braid", "1 1 -2 1 -2", "--strands", "3", "--format", "json", "--threads", t]));
    let one = run("1");
    assert_eq!(one, run("4"));
    assert_eq!(one, run("4"));
}

#[test]
fn cache_hits_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["invariants", "--braid", "1 1 1 -2 1 -2", "--strands", "3", "--format", "json", "--timings"];
    let first = knotfoam(&[&args[..], &["--cache", d]].concat());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let second = knotfoam(&[&args[..], &["--cache", d]].concat());
    assert!(stderr(&second).contains("served from cache"));
    assert!(!stderr(&first).contains("served from cache"));
    assert_eq!(stdout(&first), stdout(&second));
    assert_eq!(stdout(&first), stdout(&knotfoam(&args)));

    let env = Command::new(env!("CARGO_BIN_EXE_knotfoam"))
        .args(args)
        .env("KNOTFOAM_CACHE", d)
        .output()
        .unwrap();
    assert!(stderr(&env).contains("served from cache"));
    assert_eq!(stdout(&env), stdout(&first));
}

#[test]
fn exit_codes() {
    let o = knotfoam(&["invariants", "--pd", "X[1,2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("parse error"));
    assert_eq!(knotfoam(&["invariants", "--braid", "1 3", "--strands", "2"]).status.code(), Some(2));
    assert_eq!(knotfoam(&["invariants", "--braid", "1 x", "--strands", "2"]).status.code(), Some(2));
    assert_eq!(knotfoam(&["invariants", "--pd", "", "--braid", "1", "--strands", "2"]).status.code(), Some(2));
    assert_eq!(knotfoam(&["invariants"]).status.code(), Some(2));
    let o = knotfoam(&["invariants", "--braid", "1 1 1 1 1", "--strands", "2", "--max-crossings", "4"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("limit of 4"));
}

#[test]
fn invariant_violations_are_named() {
    let f = Failure::from(Error::Lee(LeeError::PropositionViolated { s_min: 1, s_max: 5 }));
    assert_eq!(f.code, EXIT_INVARIANT);
    assert!(f.message.starts_with("PropositionViolated"));
    let f = Failure::from(Error::Lee(LeeError::RankMismatch { expected: 2, got: 4 }));
    assert_eq!(f.code, EXIT_INVARIANT);
    assert!(f.message.contains("RankMismatch"));
}

#[test]
fn eval_foam_fixtures() {
    let foams = fixtures().join("foams");
    for (name, want) in [("red-sphere", "-1"), ("dotted-blue-sphere", "-1"), ("blue-sphere", "0"), ("theta", "0")] {
        let o = knotfoam(&["eval-foam", foams.join(format!("{name}.json")).to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), format!("{want}\nsymmetric: true\n"), "{name}");
    }
    let bad = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(bad.path(), r#"{"facets": [{"id": "S", "color": "green"}]}"#).unwrap();
    assert_eq!(knotfoam(&["eval-foam", bad.path().to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(knotfoam(&["eval-foam", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn graph_dim_fixtures() {
    let o = knotfoam(&["graph-dim", fixtures().join("graphs/nested.json").to_str().unwrap()]);
    let text = stdout(&o);
    assert!(text.contains("matches (q + q^-1)^"), "{text}");
    assert!(text.ends_with("true\n"), "{text}");
    let bad = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(bad.path(), r#"{"vertices": 3}"#).unwrap();
    assert_eq!(knotfoam(&["graph-dim", bad.path().to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn verify_relations_default_and_weak() {
    for args in [&["verify-relations"][..], &["verify-relations", "--max-dots", "0"]] {
        let o = knotfoam(args);
        assert_eq!(o.status.code(), Some(0));
        let text = stdout(&o);
        assert!(text.ends_with("23 fixtures, all pass\n"), "{text}");
        assert!(!text.contains("FAIL"));
    }
}

#[test]
fn corrupted_fixture_fails_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let good = std::fs::read_to_string(fixtures().join("relations/neck-cutting-blue.json")).unwrap();
    std::fs::write(dir.path().join("neck-cutting-blue.json"), &good).unwrap();
    let sphere = std::fs::read_to_string(fixtures().join("relations/sphere-red.json")).unwrap();
    let broken = sphere.replace(r#""coeff": "-1""#, r#""coeff": "1""#);
    assert_ne!(broken, sphere);
    std::fs::write(dir.path().join("sphere-red.json"), broken).unwrap();
    let o = knotfoam(&["verify-relations", "--fixtures", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("PASS neck-cutting-blue"), "{text}");
    assert!(text.contains("FAIL sphere-red: caps [] give lhs -1 and rhs 1"), "{text}");
}
