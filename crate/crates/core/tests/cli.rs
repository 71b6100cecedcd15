use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn refloom(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_refloom"))
        .args(args)
        .current_dir(dir)
        .env_remove("RUST_LOG")
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

#[test]
fn resolved_document_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.tex", "\\autosez{s} Intro\n\nsee \\sref{s}\n");
    let out = refloom(dir.path(), &["a.tex"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "1.  Intro\n\nsee 1\n"
    );
    assert_eq!(String::from_utf8(out.stderr).unwrap(), "1. Intro\n");
}

#[test]
fn unresolved_reference_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "a.tex",
        "\\riferimentifuturi \\eqref{missing}\n",
    );
    let out = refloom(dir.path(), &["a.tex"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains(" ??? \\eqref{missing} non definita !!!\n"));
}

#[test]
fn missing_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = refloom(dir.path(), &["absent.tex"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn parse_error_exits_two_with_position() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.tex", "ok\n\\cite oops\n");
    let out = refloom(dir.path(), &["a.tex"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("a.tex:2:1"), "{err}");
    assert!(err.contains("\\cite"), "{err}");
}

#[test]
fn flags_override_document_and_choose_names() {
    let dir = tempfile::tempdir().unwrap();
    let work = dir.path().join("work");
    fs::create_dir(&work).unwrap();
    write(
        dir.path(),
        "a.tex",
        "\\autosez{s} Intro\n\n$$ x \\autoeqno{e} $$\n",
    );
    let out = refloom(
        dir.path(),
        &[
            "a.tex",
            "--symbols",
            "--forward-refs",
            "--double-numbering",
            "--jobname",
            "job",
            "--workspace",
            "work",
            "--out",
            "a.txt",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(
        fs::read_to_string(dir.path().join("a.txt")).unwrap(),
        "1.  Intro\n\nx    (1.1)\n"
    );
    assert!(fs::read_to_string(work.join("job.smb"))
        .unwrap()
        .starts_with("Simboli di job\n"));
    assert!(fs::read_to_string(work.join("job.aux"))
        .unwrap()
        .contains("@eq@e\\endcsname{1.1}"));
}

#[test]
fn clean_discards_stale_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "a.tex",
        "\\riferimentifuturi\n\\autosez{s} Intro\n\n\\sref{s}\n",
    );
    write(dir.path(), "a.aux", "garbage\n");
    assert_eq!(refloom(dir.path(), &["a.tex"]).status.code(), Some(2));
    assert_eq!(
        refloom(dir.path(), &["a.tex", "--clean"]).status.code(),
        Some(0)
    );
}

#[test]
fn pass_limit_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "a.tex",
        "\\riferimentifuturi\n\\sref{s}\n\n\\autosez{s} S\n\n",
    );
    let out = refloom(dir.path(), &["a.tex", "--max-passes", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("not converged"));
    assert_eq!(
        refloom(dir.path(), &["a.tex", "--max-passes", "0"])
            .status
            .code(),
        Some(2)
    );
}
