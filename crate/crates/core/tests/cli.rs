use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tck::cli::{parse_file, parse_str, run, RunOptions};
use tck::corpus::documents;
use tck::search::{Budget, DEFAULT_BOUND};

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn tck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tck")).args(args).env_remove("TCK_BOUND").output().unwrap()
}

fn file(rel: &str) -> String {
    corpus().join(rel).to_str().unwrap().to_string()
}

fn listed(dir: &str) -> Vec<String> {
    let mut v: Vec<String> =
        fs::read_dir(corpus().join(dir)).unwrap().map(|e| e.unwrap().path().to_str().unwrap().to_string()).collect();
    v.sort();
    v
}

#[test]
fn shipped_corpus_is_current() {
    let docs = documents();
    for (rel, text) in &docs {
        let on_disk = fs::read_to_string(corpus().join(rel)).unwrap_or_else(|_| panic!("{rel} missing"));
        assert_eq!(&on_disk, text, "{rel} is stale; rerun the write_corpus example");
    }
    let count: usize =
        ["sites", "presheaves", "opfibrations", "stacks", "maps", "omega-j"].iter().map(|d| listed(d).len()).sum();
    assert_eq!(count, docs.len());
}

#[test]
fn serialize_parse_is_idempotent_on_the_corpus() {
    for (rel, text) in documents() {
        let doc = parse_str(&text, &mut Budget::new(DEFAULT_BOUND)).unwrap_or_else(|e| panic!("{rel}: {e}"));
        let again = doc.to_text();
        assert_eq!(again, text, "{rel}");
        assert_eq!(parse_str(&again, &mut Budget::new(DEFAULT_BOUND)).unwrap(), doc);
    }
}

#[test]
fn roundtrip_passes_on_every_fixture() {
    let mut n = 0;
    for dir in ["opfibrations", "stacks", "maps"] {
        for path in listed(dir) {
            let out = tck(&["roundtrip", &path]);
            assert_eq!(out.status.code(), Some(0), "{path}: {}", String::from_utf8_lossy(&out.stdout));
            n += 1;
        }
    }
    assert!(n >= 20);
}

#[test]
fn every_omega_j_datum_glues() {
    for path in listed("omega-j") {
        assert_eq!(tck(&["probe-omega-j", &path]).status.code(), Some(0), "{path}");
    }
}

#[test]
fn site_checks() {
    for path in listed("sites") {
        let out = tck(&["check-site", &path]);
        let broken = path.contains("broken-");
        assert_eq!(out.status.code(), Some(if broken { 1 } else { 0 }), "{path}");
        if broken {
            let kind = path.rsplit("broken-").next().unwrap().trim_end_matches(".tck");
            assert!(String::from_utf8_lossy(&out.stdout).contains(&format!("{kind} axiom")), "{path}");
        }
    }
}

#[test]
fn exit_codes() {
    let pointed = file("opfibrations/Pt-pointed.tck");
    assert_eq!(tck(&["validate", &pointed]).status.code(), Some(0));
    assert_eq!(tck(&["char-stacks", &file("stacks/non-stack.tck")]).status.code(), Some(1));
    assert_eq!(tck(&["check-sheaf", &file("presheaves/non-separated.tck")]).status.code(), Some(1));
    assert_eq!(tck(&["check-sheaf", &file("presheaves/sheaf-2-2.tck")]).status.code(), Some(0));
    assert_eq!(tck(&["roundtrip", &pointed, "--bound", "1"]).status.code(), Some(2));
    let bounded = Command::new(env!("CARGO_BIN_EXE_tck")).args(["roundtrip", &pointed]).env("TCK_BOUND", "1").output();
    assert_eq!(bounded.unwrap().status.code(), Some(2));
    assert_eq!(tck(&["frobnicate", &pointed]).status.code(), Some(3));
    assert_eq!(tck(&["sheafify", &pointed]).status.code(), Some(3));
    assert_eq!(tck(&["validate", "/nonexistent/file.tck"]).status.code(), Some(3));
    assert_eq!(tck(&["validate"]).status.code(), Some(3));
    assert_eq!(tck(&["validate", &pointed, "--bound", "many"]).status.code(), Some(3));
}

#[test]
fn reports_are_byte_identical_and_sorted() {
    for (cmd, rel) in [
        ("char", "opfibrations/Pt-pointed.tck"),
        ("sheafify", "presheaves/non-separated.tck"),
        ("ff-check", "maps/ff-pair.tck"),
        ("char-stacks", "stacks/sheaf22-to-sheaf22-1.tck"),
    ] {
        let (a, b) = (tck(&[cmd, &file(rel)]), tck(&[cmd, &file(rel)]));
        assert_eq!(a.stdout, b.stdout, "{cmd} {rel}");
        assert_eq!(a.status.code(), Some(0), "{cmd} {rel}");
    }
    let out = String::from_utf8(tck(&["char", &file("opfibrations/Pt-pointed.tck")]).stdout).unwrap();
    let table: Vec<&str> = out
        .lines()
        .skip_while(|l| !l.starts_with("witness fibre functor"))
        .skip(1)
        .take_while(|l| l.starts_with("  "))
        .collect();
    assert_eq!(
        table,
        ["  * a : (*,a,id_a)", "  * b : (*,b,s) (*,b,t)", "  * s : (*,a,id_a)>(*,b,s)", "  * t : (*,a,id_a)>(*,b,t)"]
    );
    let mut sorted = table.clone();
    sorted.sort();
    assert_eq!(sorted, table);
}

#[test]
fn sheafify_collapses_the_two_sections() {
    let out = String::from_utf8(tck(&["sheafify", &file("presheaves/non-separated.tck")]).stdout).unwrap();
    assert!(out.contains("verdict: pass"));
    let set = out.lines().find(|l| l.trim_start().starts_with("set 12 ")).unwrap();
    assert_eq!(set.split_whitespace().count(), 3, "{set}");
    assert!(out.contains("witness unit is an iso:\n  no"));
}

#[test]
fn json_and_out_flags() {
    let pointed = file("opfibrations/Pt-pointed.tck");
    let out = tck(&["roundtrip", &pointed, "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["command"], "roundtrip");
    assert_eq!(v["verdict"], "pass");
    assert!(v.get("timing_ms").is_none());
    let dir = std::env::temp_dir().join(format!("tck-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let target = dir.join("report.json");
    let out = tck(&["roundtrip", &pointed, "--json", "--out", target.to_str().unwrap()]);
    assert!(out.stdout.is_empty());
    let written: serde_json::Value = serde_json::from_str(&fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(written, v);
    assert_eq!(fs::read_dir(&dir).unwrap().count(), 1);
    fs::remove_dir_all(&dir).unwrap();
    let timed = tck(&["roundtrip", &pointed, "--json", "--timing"]);
    let t: serde_json::Value = serde_json::from_slice(&timed.stdout).unwrap();
    assert!(t["timing_ms"].is_number());
}

#[test]
fn library_and_binary_agree() {
    let path = corpus().join("maps/ff-pair.tck");
    let doc = parse_file(&path, &mut Budget::new(DEFAULT_BOUND)).unwrap();
    let report = run("ff-check", &doc, RunOptions { bound: DEFAULT_BOUND, timing: false }).unwrap();
    let out = tck(&["ff-check", path.to_str().unwrap()]);
    assert_eq!(report.render().as_bytes(), &out.stdout[..]);
    assert_eq!(report.exit_code(), out.status.code().unwrap());
}
