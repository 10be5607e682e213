use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mpcshield(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mpcshield")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

const TOY: &str = "prime=7\nplayers=4\nthreshold=2\nshares=2,0,5,3\ncorrupt=3:4\nmode=full\nseed=1\n";

#[test]
fn toy_scenario_report_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write(dir.path(), "toy.scn", TOY);
    let trace = dir.path().join("trace.txt");
    let out = mpcshield(&["run", "--scenario", &scenario, "--trace", trace.to_str().unwrap()]);
    assert!(out.status.success());
    let report = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        report,
        "prime: 7\n\
         players: 4\n\
         threshold: 2\n\
         mode: full\n\
         seed: 1\n\
         shares: 2,0,5,3\n\
         corrupted: player=3 old=5 new=4\n\
         received: 2,0,4,3\n\
         detection: location=3\n\
         d1: 4\n\
         d2: 1\n\
         b0: 4\n\
         detection_rounds: 3\n\
         correction: player=3 recovered=5 rounds=2\n\
         final: 2,0,5,3\n\
         status: ok\n"
    );
    let trace = fs::read_to_string(trace).unwrap();
    let lines: Vec<&str> = trace.lines().collect();
    assert_eq!(lines[0], "round=1 from=1 to=* kind=minor_broadcast payload=2,6,6,2");
    assert!(lines.iter().all(|l| l.starts_with("round=")));
    let last_round: Vec<&str> = lines.iter().copied().filter(|l| l.starts_with("round=5 ")).collect();
    assert_eq!(last_round.len(), 2);
    assert!(last_round.iter().all(|l| l.contains("to=3 kind=sigma")));
}

#[test]
fn output_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write(dir.path(), "toy.scn", TOY);
    let t1 = dir.path().join("a.txt");
    let t2 = dir.path().join("b.txt");
    let a = mpcshield(&["run", "--scenario", &scenario, "--trace", t1.to_str().unwrap()]);
    let b = mpcshield(&["run", "--scenario", &scenario, "--trace", t2.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(fs::read(t1).unwrap(), fs::read(t2).unwrap());
}

#[test]
fn seed_flag_overrides_file() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write(dir.path(), "toy.scn", TOY);
    let out = mpcshield(&["run", "--scenario", &scenario, "--seed", "9"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("seed: 9\n"));
}

#[test]
fn no_trace_without_flag_and_clean_detect() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write(dir.path(), "clean.scn", "prime=7\nplayers=4\nthreshold=2\nshares=2,0,5,3\nmode=detect\n");
    let out = mpcshield(&["run", "--scenario", &scenario]);
    assert!(out.status.success());
    let report = String::from_utf8(out.stdout).unwrap();
    assert!(report.contains("detection: none\n"));
    assert!(!report.contains("round="));
}

#[test]
fn undecodable_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write(dir.path(), "bad.scn", "prime=7\nplayers=4\nthreshold=2\nshares=2,1,4,3\nmode=full\n");
    let out = mpcshield(&["run", "--scenario", &scenario]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().contains("detection: undecodable\n"));
}

#[test]
fn bad_input_reports_error() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write(dir.path(), "bad.scn", "prime=6\nplayers=4\nshares=1,2,3,4\n");
    let out = mpcshield(&["run", "--scenario", &scenario]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("not prime"));

    let scenario = write(dir.path(), "partial.scn", "players=4\n");
    let out = mpcshield(&["run", "--scenario", &scenario]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("missing required keys"));
}

#[test]
fn encode_mode_prints_shares() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write(dir.path(), "enc.scn", "prime=101\nplayers=5\nthreshold=3\nsecret=42\nmode=encode\nseed=3\n");
    let out = mpcshield(&["run", "--scenario", &scenario]);
    assert!(out.status.success());
    let report = String::from_utf8(out.stdout).unwrap();
    let shares = report.lines().find_map(|l| l.strip_prefix("shares: ")).unwrap();
    assert_eq!(shares.split(',').count(), 5);
}
