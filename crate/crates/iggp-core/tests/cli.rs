//! End-to-end checks of the `iggp` binary: exit codes, diagnostics, and
//! manifest reproducibility.

use std::path::Path;
use std::process::{Command, Output};

fn iggp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iggp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).to_string()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn parse_valid_bundle_reports_strata() {
    let out = iggp(&["parse", "rock_paper_scissors"]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("safety: ok"));
    assert!(text.contains("stratified: yes, strata: 1"), "got: {text}");
}

#[test]
fn parse_unstratifiable_file_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("loop.gdl");
    std::fs::write(&path, "(role you)\n(legal you go)\n(<= p (not p))\n").unwrap();
    let out = iggp(&["parse", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr(&out).contains("not stratifiable"));
}

#[test]
fn parse_missing_file_exits_two() {
    let out = iggp(&["parse", "/nonexistent/game.gdl"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn usage_error_exits_two() {
    let out = iggp(&["gen", "--no-such-flag"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn simulate_tiny_episode_and_reproducible_digest() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a.txt");
    let out_b = dir.path().join("b.txt");
    for out_path in [&out_a, &out_b] {
        let out = iggp(&[
            "simulate",
            "--game",
            "minimal_decay",
            "--traces",
            "1",
            "--max-steps",
            "1",
            "--seed",
            "9",
            "--out",
            out_path.to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    }
    // a 1-step budget yields at most 2 states
    let dump = std::fs::read_to_string(&out_a).unwrap();
    let states = dump.lines().filter(|l| l.starts_with("#state")).count();
    assert!(states <= 2, "expected at most 2 states, dump:\n{dump}");
    assert_eq!(
        std::fs::read(&out_a).unwrap(),
        std::fs::read(&out_b).unwrap(),
        "same seed, same bytes"
    );
    let manifest_a = std::fs::read_to_string(dir.path().join("a.txt.manifest")).unwrap();
    let manifest_b = std::fs::read_to_string(dir.path().join("b.txt.manifest")).unwrap();
    let digest = |m: &str| {
        m.lines()
            .find(|l| l.starts_with("digest = "))
            .map(str::to_string)
            .expect("digest line")
    };
    assert_eq!(digest(&manifest_a), digest(&manifest_b));
}

#[test]
fn gen_tiny_run_produces_next_triples() {
    let dir = tempfile::tempdir().unwrap();
    let out = iggp(&[
        "gen",
        "--game",
        "minimal_decay",
        "--traces",
        "2",
        "--max-steps",
        "3",
        "--seed",
        "1",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let mut next_triples = 0;
    for split in ["train", "validate", "test"] {
        let path = dir
            .path()
            .join("minimal_decay/next")
            .join(format!("{split}.triples"));
        let text = std::fs::read_to_string(&path).unwrap();
        next_triples += text.lines().filter(|l| l.starts_with("#triple")).count();
    }
    assert!(next_triples >= 2, "expected at least 2 next triples, got {next_triples}");
    assert!(dir.path().join("minimal_decay.manifest").is_file());
    assert!(dir.path().join("minimal_decay/game.gdl").is_file());
    assert!(dir.path().join("minimal_decay/signature.sig").is_file());
}

#[test]
fn gen_with_mismatched_signature_names_the_symbol() {
    let dir = tempfile::tempdir().unwrap();
    let game = dir.path().join("game.gdl");
    let sig = dir.path().join("game.sig");
    std::fs::write(&game, "(role you)\n(legal you go)\n(mystery you)\n").unwrap();
    std::fs::write(
        &sig,
        "role :: agent -> bool.\nlegal, does :: agent -> act -> bool.\ntrue, next, init :: prop -> bool.\nterminal :: bool.\nyou :: agent.\ngo :: act.\n",
    )
    .unwrap();
    let out = iggp(&[
        "gen",
        "--game",
        game.to_str().unwrap(),
        "--sig",
        sig.to_str().unwrap(),
        "--out",
        dir.path().join("ds").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr(&out).contains("mystery"), "stderr: {}", stderr(&out));
}

#[test]
fn baseline_true_writes_report_rows() {
    let dir = tempfile::tempdir().unwrap();
    let ds = dir.path().join("ds");
    let gen = iggp(&[
        "gen",
        "--game",
        "rock_paper_scissors",
        "--traces",
        "10",
        "--max-steps",
        "10",
        "--seed",
        "3",
        "--out",
        ds.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&gen), 0);
    let report = dir.path().join("report.tsv");
    let out = iggp(&[
        "baseline",
        "--dataset",
        ds.to_str().unwrap(),
        "--method",
        "true",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let tsv = std::fs::read_to_string(&report).unwrap();
    assert_eq!(tsv.lines().count(), 5, "header plus four targets:\n{tsv}");
    // the accept-all baseline scores exactly 0.5 on the two-class next task
    let next_row: Vec<&str> = tsv
        .lines()
        .find(|l| l.starts_with("rock_paper_scissors\tnext"))
        .expect("next row")
        .split('\t')
        .collect();
    assert_eq!(next_row[7], "0.500000");
    assert!(Path::new(&format!("{}.manifest", report.display())).is_file());
}

#[test]
fn baseline_knn_with_too_few_training_triples_fails() {
    let dir = tempfile::tempdir().unwrap();
    let ds = dir.path().join("ds");
    let gen = iggp(&[
        "gen",
        "--game",
        "minimal_decay",
        "--traces",
        "2",
        "--max-steps",
        "3",
        "--seed",
        "1",
        "--out",
        ds.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&gen), 0);
    let out = iggp(&[
        "baseline",
        "--dataset",
        ds.to_str().unwrap(),
        "--method",
        "knn5",
        "--out",
        dir.path().join("r.tsv").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr(&out).contains("exceeds"), "stderr: {}", stderr(&out));
}

#[test]
fn eval_reference_scores_perfectly() {
    let dir = tempfile::tempdir().unwrap();
    let ds = dir.path().join("ds");
    let gen = iggp(&[
        "gen",
        "--game",
        "minimal_decay",
        "--traces",
        "5",
        "--max-steps",
        "10",
        "--seed",
        "2",
        "--out",
        ds.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&gen), 0);
    let report = dir.path().join("eval.tsv");
    let out = iggp(&[
        "eval",
        "--dataset",
        ds.to_str().unwrap(),
        "--reference",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let tsv = std::fs::read_to_string(&report).unwrap();
    for line in tsv.lines().skip(1) {
        let cols: Vec<&str> = line.split('\t').collect();
        assert_eq!(cols[8], "true", "perfectly_solved column in: {line}");
    }
}

#[test]
fn eval_with_explicit_hypothesis_file() {
    let dir = tempfile::tempdir().unwrap();
    let ds = dir.path().join("ds");
    let gen = iggp(&[
        "gen",
        "--game",
        "minimal_decay",
        "--traces",
        "5",
        "--max-steps",
        "10",
        "--seed",
        "2",
        "--out",
        ds.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&gen), 0);
    // hand-written hypothesis over the flattened predicates
    let hyp = dir.path().join("h.gdl");
    std::fs::write(
        &hyp,
        "(<= (next_value ?y) (true_value ?x) (succ ?y ?x))\n(<= (goal you ?x) (true_value ?x))\n(<= terminal (true_value 0))\n(legal you noop)\n",
    )
    .unwrap();
    let report = dir.path().join("eval.tsv");
    let out = iggp(&[
        "eval",
        "--dataset",
        ds.to_str().unwrap(),
        "--hypothesis",
        hyp.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let tsv = std::fs::read_to_string(&report).unwrap();
    for line in tsv.lines().skip(1) {
        let cols: Vec<&str> = line.split('\t').collect();
        assert_eq!(cols[8], "true", "hand hypothesis solves decay: {line}");
    }
}

#[test]
fn eval_without_hypothesis_source_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let ds = dir.path().join("ds");
    let gen = iggp(&[
        "gen", "--game", "minimal_decay", "--traces", "2", "--max-steps", "3",
        "--out", ds.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&gen), 0);
    let out = iggp(&["eval", "--dataset", ds.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn unknown_game_name_exits_two() {
    let out = iggp(&["parse", "tic_tac_toe_supreme"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("no such file or bundled game"));
}
