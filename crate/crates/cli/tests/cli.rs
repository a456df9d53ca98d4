use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .display()
        .to_string()
}

fn wtl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wtl")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn run_and_oracle_exit_codes() {
    let exa21 = fixture("exa21.wtl");
    assert_eq!(code(&wtl(&["run", &exa21, "--", "b", "b", "a"])), 0);
    assert_eq!(code(&wtl(&["run", &exa21, "--chars", "--", "bba"])), 0);
    assert_eq!(code(&wtl(&["run", &exa21, "--", "a"])), 1);
    assert_eq!(code(&wtl(&["run", &exa21, "--", "z"])), 2);
    assert_eq!(code(&wtl(&["oracle", "l_rep", "--", "b", "a"])), 0);
    assert_eq!(code(&wtl(&["oracle", "l_rep", "--", "b"])), 1);
    assert_eq!(code(&wtl(&["oracle", "nope", "--", "b"])), 2);
}

#[test]
fn usage_and_format_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.wtl");
    std::fs::write(&bad, "mode: returning\nstates: q\n").unwrap();
    let o = wtl(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(!o.stderr.is_empty());
    assert_eq!(code(&wtl(&["validate", "/nonexistent.wtl"])), 2);
    assert_eq!(code(&wtl(&["enumerate", &fixture("m_fin.wtl")])), 2);
    assert_eq!(code(&wtl(&["decide", "emptiness", &fixture("exa22.wtl")])), 2);
    assert_eq!(code(&wtl(&["construct", "union", &fixture("m_L1.wtl")])), 2);
    let o = wtl(&["--max-configurations", "2", "run", &fixture("exa21.wtl"), "--", "b", "b", "a"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("resource guard"));
}

#[test]
fn construct_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("nr.wtl");
    let src = fixture("exa21.wtl");
    assert_eq!(code(&wtl(&["construct", "nonreturning", &src, "-o", out.to_str().unwrap()])), 0);
    let v = wtl(&["validate", out.to_str().unwrap()]);
    assert_eq!(code(&v), 0);
    assert!(stdout(&v).contains("non-returning"));
    let c = wtl(&["compare", &src, out.to_str().unwrap(), "--max-len", "7"]);
    assert_eq!(code(&c), 0);
    assert_eq!(stdout(&c).trim(), "equivalent up to 7");

    let u = dir.path().join("u.wtl");
    let (a, b) = (fixture("m_astar.wtl"), fixture("m_abc_counts.wtl"));
    assert_eq!(code(&wtl(&["construct", "union", &a, &b, "-o", u.to_str().unwrap()])), 0);
    assert_eq!(code(&wtl(&["validate", u.to_str().unwrap()])), 0);

    let n = wtl(&["construct", "npda", &src]);
    assert_eq!(code(&n), 0);
    assert!(!stdout(&n).is_empty());
}

#[test]
fn compare_reports_a_difference() {
    let o = wtl(&["compare", &fixture("m_L1.wtl"), &fixture("m_union_L1L2.wtl"), "--max-len", "5"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("differ on: "));
}

#[test]
fn decision_reports() {
    let o = wtl(&["decide", "emptiness", &fixture("m_fin.wtl"), "--json"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["question"], "emptiness");
    assert_eq!(v["answer"], false);
    assert_eq!(v["witness"][0], "a");

    assert_eq!(code(&wtl(&["decide", "emptiness", &fixture("m_empty.wtl")])), 0);
    let f = wtl(&["decide", "finiteness", &fixture("exa21.wtl")]);
    assert_eq!(code(&f), 1);
    assert!(stdout(&f).contains("cycle: "));

    let u = wtl(&["universality", &fixture("m_astar.wtl"), "--bound", "0", "--json"]);
    assert_eq!(code(&u), 3);
    let v: serde_json::Value = serde_json::from_str(&stdout(&u)).unwrap();
    assert_eq!(v["answer"], "unknown");
    assert_eq!(v["bound"], 0);
    assert_eq!(code(&wtl(&["universality", &fixture("m_astar.wtl"), "--bound", "2"])), 1);
}

#[test]
fn enumerate_trace_and_parikh() {
    let e = wtl(&["enumerate", &fixture("m_fin.wtl"), "--max-len", "4"]);
    assert_eq!(stdout(&e), "a\na b\n");
    let t = wtl(&["trace", &fixture("exa21.wtl"), "--", "b", "b", "a"]);
    assert_eq!(code(&t), 0);
    assert!(stdout(&t).lines().last() == Some("ACCEPT"));
    let p = wtl(&["parikh", "oracle:l_rep", "--max-len", "2"]);
    assert_eq!(stdout(&p), "#=0 a=1 b=1\n");
    let q = wtl(&["parikh", &fixture("m_L1.wtl"), "--max-len", "4"]);
    assert_eq!(stdout(&q), "#=1 a=1 b=2\n");
}

#[test]
fn fixtures_emit_matches_files() {
    let l = wtl(&["fixtures", "list"]);
    assert!(stdout(&l).lines().any(|x| x.starts_with("exa21 ")));
    for name in ["exa21", "m_abc_counts"] {
        let o = wtl(&["fixtures", "emit", name]);
        assert_eq!(stdout(&o), std::fs::read_to_string(fixture(&format!("{name}.wtl"))).unwrap());
    }
    assert_eq!(code(&wtl(&["fixtures", "emit", "nope"])), 2);
}

#[test]
fn valc_commands() {
    let lba = fixture("toy.lba");
    let g = wtl(&["valc", "gen", &lba, "--", "a", "b"]);
    assert_eq!(code(&g), 0);
    let word = stdout(&g);
    let c = wtl(&["valc", "check", &lba, "--", word.trim()]);
    assert_eq!(code(&c), 0);
    assert!(stdout(&c).contains("INVALC machine: rejects"));

    let m = wtl(&["valc", "gen", &lba, "--mutate", "--seed", "5", "--", "a", "b"]);
    let mutant = stdout(&m);
    assert_ne!(mutant, word);
    assert_eq!(mutant, stdout(&wtl(&["valc", "gen", &lba, "--mutate", "--seed", "5", "--", "a", "b"])));
    let c = wtl(&["valc", "check", &lba, "--", mutant.trim()]);
    assert_eq!(code(&c), 1);
    assert!(stdout(&c).contains("INVALC machine: accepts"));

    assert_eq!(code(&wtl(&["valc", "gen", &lba, "--", "b"])), 1);
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("invalc.wtl");
    assert_eq!(code(&wtl(&["valc", "build", &lba, "-o", out.to_str().unwrap()])), 0);
    assert_eq!(code(&wtl(&["validate", out.to_str().unwrap()])), 0);
}
