use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;
use zircon_core::sweep::SweepReport;

const DIAMOND: &str = r#"{"elements":["0","1","2","3"],"covers":[["0","1"],["0","2"],["1","3"],["2","3"]]}"#;
const N_POSET: &str = r#"{"elements":["a","b","c","d"],"covers":[["a","c"],["a","d"],["b","d"]]}"#;

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        Fixture { dir: TempDir::new().unwrap() }
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, contents).unwrap();
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn zircon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zircon")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn check_diamond_passes() {
    let f = Fixture::new();
    let p = f.file("p.json", DIAMOND);
    let m = f.file("m.json", r#"{"pairs":[["0","1"],["2","3"]]}"#);
    let out = zircon(&["check", s(&p), s(&m)]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["special"], true);
    assert!(r.get("fixed_point").is_none());

    let swap = f.file("swap.json", r#"{"map":{"1":"2","2":"1"}}"#);
    let out = zircon(&["check", s(&p), s(&m), "--automorphism", s(&swap)]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["fixed_point"]["matching"], serde_json::json!([["0", "3"]]));
    assert_eq!(r["fixed_point"]["order_N"], 2);
    assert_eq!(r["fixed_point"]["special"], true);
}

#[test]
fn check_n_poset_fails_with_witness() {
    let f = Fixture::new();
    let p = f.file("n.json", N_POSET);
    let m = f.file("m.json", r#"{"pairs":[["a","c"],["b","d"]]}"#);
    let out = zircon(&["check", s(&p), s(&m)]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(r["special"], false);
    assert_eq!(r["witness"], serde_json::json!(["a", "d"]));
}

#[test]
fn check_rejects_bad_input() {
    let f = Fixture::new();
    let p = f.file("p.json", DIAMOND);
    let cases = [
        ("broken.json", "{not json"),
        ("unknown.json", r#"{"pairs":[["0","9"],["2","3"]]}"#),
        ("schema.json", r#"{"pairz":[]}"#),
    ];
    for (name, body) in cases {
        let m = f.file(name, body);
        assert_eq!(zircon(&["check", s(&p), s(&m)]).status.code(), Some(2), "{name}");
    }
    // Not a perfect matching of the Hasse diagram: a failed check, not bad input.
    let m = f.file("m.json", r#"{"pairs":[["0","3"],["1","2"]]}"#);
    let out = zircon(&["check", s(&p), s(&m)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["is_matching"], false);

    let m = f.file("ok.json", r#"{"pairs":[["0","1"],["2","3"]]}"#);
    let bad_map = f.file("map.json", r#"{"map":{"0":"1","1":"0"}}"#);
    let out = zircon(&["check", s(&p), s(&m), "--automorphism", s(&bad_map)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_exhaustive_report() {
    let f = Fixture::new();
    let manifest = f.file("m.json", r#"{"mode": "exhaustive", "max_n": 4}"#);
    let a = f.path("a.json");
    let out = zircon(&["sweep", s(&manifest), "--output", s(&a), "--jobs", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&a).unwrap();
    let report: SweepReport = serde_json::from_str(&text).unwrap();
    assert_eq!(report.summary.posets, 24);
    assert_eq!(report.summary.posets_by_size[&4], 16);
    assert_eq!(report.summary.violations, 0);
    assert!(report.duration_ms.is_none());

    // Summary counts are the sums over the records.
    let verdicts: usize = report.records.iter().map(|r| r.verdicts.len()).sum();
    let counted: u64 = report.summary.checks.values().map(|c| c.passed + c.failed).sum();
    assert_eq!(verdicts as u64, counted);
    assert_eq!(report.summary.cases as usize, report.records.len());

    // Lossless round trip and byte-identical reruns.
    let mut again = serde_json::to_string_pretty(&report).unwrap();
    again.push('\n');
    assert_eq!(again, text);
    let b = f.path("b.json");
    zircon(&["sweep", s(&manifest), "--output", s(&b), "--jobs", "1"]);
    assert_eq!(std::fs::read(&b).unwrap(), text.as_bytes());
}

#[test]
fn sweep_random_and_timing() {
    let f = Fixture::new();
    let manifest = f.file("m.json", r#"{"mode": "random", "n": 8, "seeds": [1, 2, 3], "density": 0.3}"#);
    let out = zircon(&["sweep", s(&manifest), "--timing"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert!(r["duration_ms"].is_u64());
    assert_eq!(r["options"]["intervals"], true);
    assert_eq!(r["summary"]["posets"], 3);
}

#[test]
fn sweep_rejects_bad_manifest() {
    let f = Fixture::new();
    for (name, body) in [
        ("mode.json", r#"{"mode": "bogus"}"#),
        ("big.json", r#"{"mode": "exhaustive", "max_n": 9}"#),
        ("extra.json", r#"{"mode": "exhaustive", "max_n": 3, "x": 1}"#),
    ] {
        let m = f.file(name, body);
        assert_eq!(zircon(&["sweep", s(&m)]).status.code(), Some(2), "{name}");
    }
}

#[test]
fn coxeter_actions() {
    let out = zircon(&["coxeter", "A2", "export"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["elements"].as_array().unwrap().len(), 6);
    assert_eq!(r["covers"].as_array().unwrap().len(), 8);

    let out = zircon(&["coxeter", "A2", "twisted", "id"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["elements"], 4);
    assert_eq!(r["zircon"], true);
    assert_eq!(r["sphericity"], "pass");
    assert_eq!(r["equals_fixed_points"], true);

    let out = zircon(&["coxeter", "A3", "fix-check", "flip", "--against", "B2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["isomorphic"], true);

    let out = zircon(&["coxeter", "A3", "fix-check", "id", "--against", "B2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["isomorphic"], false);

    let out = zircon(&["coxeter", "I2:5", "zircon-check"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["zircon"], true);

    let out = zircon(&["coxeter", "A2", "export", "--format", "dot"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("rankdir=BT"));
}

#[test]
fn coxeter_rejects_bad_input() {
    for args in [
        &["coxeter", "B3", "twisted", "flip"][..],
        &["coxeter", "A3", "twisted", "1,1,2"],
        &["coxeter", "Q2", "export"],
        &["coxeter", "A3", "fix-check", "flip"],
        &["coxeter", "B5", "export", "--cap-order", "100"],
    ] {
        assert_eq!(zircon(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn dot_and_mobius() {
    let f = Fixture::new();
    let p = f.file("p.json", DIAMOND);
    let out = zircon(&["dot", s(&p)]);
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.contains("\"0\" -> \"1\";"));

    let out = zircon(&["mobius", s(&p), "0", "3"]);
    assert_eq!(json(&out)[0]["mu"], 1);
    let all = json(&zircon(&["mobius", s(&p)]));
    assert_eq!(all.as_array().unwrap().len(), 9);
    assert_eq!(zircon(&["mobius", s(&p), "3", "0"]).status.code(), Some(2));

    let dest = f.path("out.dot");
    zircon(&["dot", s(&p), "--output", s(&dest)]);
    assert_eq!(std::fs::read_to_string(dest).unwrap(), dot);
}
