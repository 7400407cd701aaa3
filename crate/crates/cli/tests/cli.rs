use std::collections::BTreeSet;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_leaky-hurwitz");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("HURWITZ_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json_lines(out: &Output) -> Vec<serde_json::Value> {
    stdout(out).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn one_part_anchor() {
    let out = run(&["--format", "json", "compute", "--mu", "5", "--nu", "1,1,1", "--k", "1", "--r", "1", "--s", "2", "--connected"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let records = json_lines(&out);
    assert_eq!(records.len(), 1);
    let r = &records[0];
    assert_eq!((r["num"].as_str(), r["den"].as_str()), (Some("9"), Some("1")));
    assert_eq!(r["genus"], "0");
    let keys: BTreeSet<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
    let expected: BTreeSet<&str> =
        ["mu", "nu", "k", "r", "s", "connected", "num", "den", "genus", "method", "ms"].into_iter().collect();
    assert_eq!(keys, expected);
}

#[test]
fn energy_imbalance_is_zero() {
    let out = run(&["compute", "--mu", "3", "--nu", "3", "--k", "1", "--r", "1", "--s", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("= 0/1"), "{}", stdout(&out));
}

#[test]
fn genus_resolves_insertions() {
    let out = run(&["--format", "csv", "compute", "--mu", "7", "--nu", "1,1,1,1", "--k", "1", "--g", "0", "--connected"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("mu,nu,k,r,s,connected,num,den,genus,method,ms"));
    assert_eq!(lines.next(), Some("7,\"1,1,1,1\",1,1,3,true,234,1,0,engine,0"));
}

#[test]
fn usage_errors_name_the_flag() {
    let out = run(&["compute", "--mu", "5,0,1", "--nu", "1", "--k", "1", "--s", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("--mu") && err.contains("part 2"), "{err}");

    let out = run(&["compute", "--mu", "5", "--nu", "1", "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--g"));

    let out = run(&["compute", "--mu", "3", "--nu", "1,1", "--k", "1", "--r", "3", "--g", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--g 0"), "{}", stderr(&out));

    let out = run(&["wall-cross", "--mu", "3", "--nu", "1", "--s", "2", "--i", "2", "--t", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--i"));
}

#[test]
fn oracle_suite_passes() {
    let out = run(&["oracle-verify", "--max-size", "4", "--max-s", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("0 mismatches"), "{}", stdout(&out));
}

#[test]
fn values_do_not_depend_on_thread_count() {
    let table = |threads: &str| {
        let out = run(&["--threads", threads, "--format", "csv", "table", "--max-size", "5", "--s", "2", "--k-min", "-2", "--k-max", "2"]);
        assert_eq!(out.status.code(), Some(0));
        stdout(&out)
    };
    let single = table("1");
    assert!(single.lines().count() > 100);
    assert_eq!(single, table("4"));
    assert_eq!(single, table("4"));
}

#[test]
fn cache_file_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.jsonl");
    let args = ["--format", "json", "compute", "--mu", "4,1", "--nu", "2,1", "--k", "1", "--s", "2", "--connected"];
    let first = Command::new(BIN).args(args).env("HURWITZ_CACHE", &path).output().unwrap();
    let second = Command::new(BIN).args(args).env("HURWITZ_CACHE", &path).output().unwrap();
    let (a, b) = (&json_lines(&first)[0], &json_lines(&second)[0]);
    assert_eq!(a["method"], "engine");
    assert_eq!(b["method"], "cache");
    assert_eq!((&a["num"], &a["den"]), (&b["num"], &b["den"]));
    assert!(path.exists());
}

#[test]
fn wall_crossing_on_a_wall() {
    let out = run(&["wall-cross", "--mu", "11,8", "--nu", "10,7", "--s", "2", "--i", "1", "--j", "1", "--t", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("points agree"));
}

#[test]
fn chamber_fit_reports_polynomial() {
    let out = run(&["--format", "json", "chamber-fit", "--mu", "2", "--nu", "1", "--r", "2", "--s", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = &json_lines(&out)[0];
    assert_eq!(r["polynomial"], "1/24*x1^2 + 1/24*y1^2 - 1/24");
    assert_eq!(r["held_out"], 5);
}

#[test]
fn cut_and_join_suite() {
    let out = run(&["cutjoin-verify", "--max-size", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains(", 0 failing"));
}

#[test]
fn tree_dump_is_dot() {
    let out = run(&["tree-dump", "--mu", "3", "--nu", "1,1", "--k", "1", "--s", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let dot = stdout(&out);
    assert!(dot.starts_with("digraph") && dot.trim_end().ends_with('}'));
}

#[test]
fn selftest_single_criterion() {
    let out = run(&["selftest", "--only", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("PASS"));
    assert_eq!(run(&["selftest", "--only", "11"]).status.code(), Some(2));
}

#[test]
fn output_is_byte_stable() {
    let args = ["--format", "json", "table", "--max-size", "4", "--g", "0", "--connected"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
