//! Byte-for-byte transcripts of CLI sessions.
//!
//! A transcript is a list of `$ command` lines, each followed by the exact
//! output it produces (stdout, then stderr, then `[exit N]` when N is not 0).
//! Commands run in a scratch copy of `tests/data`. Set `VISEMAP_BLESS=1` to
//! rewrite the files under `tests/golden` from the current binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn copy_dir(from: &Path, to: &Path) {
    fs::create_dir_all(to).unwrap();
    for entry in fs::read_dir(from).unwrap() {
        let entry = entry.unwrap();
        let target = to.join(entry.file_name());
        if entry.file_type().unwrap().is_dir() {
            copy_dir(&entry.path(), &target);
        } else {
            fs::copy(entry.path(), target).unwrap();
        }
    }
}

fn run_line(line: &str, cwd: &Path) -> String {
    let mut words = line.split_whitespace();
    match words.next() {
        Some("visemap") => {
            let out = Command::new(env!("CARGO_BIN_EXE_visemap"))
                .args(words)
                .current_dir(cwd)
                .env_remove("VISEMAP_CATALOG")
                .output()
                .unwrap();
            let mut text = String::from_utf8(out.stdout).unwrap();
            text.push_str(&String::from_utf8(out.stderr).unwrap());
            let code = out.status.code().unwrap();
            if code != 0 {
                text.push_str(&format!("[exit {code}]\n"));
            }
            text
        }
        Some("cat") => fs::read_to_string(cwd.join(words.next().unwrap())).unwrap(),
        _ => panic!("unsupported transcript command `{line}`"),
    }
}

/// Splits a transcript into (command, expected output) pairs.
fn parse(transcript: &str) -> Vec<(String, String)> {
    let mut steps: Vec<(String, String)> = Vec::new();
    for line in transcript.split_inclusive('\n') {
        if let Some(cmd) = line.strip_prefix("$ ") {
            steps.push((cmd.trim_end().to_string(), String::new()));
        } else {
            steps
                .last_mut()
                .expect("transcript starts with a command")
                .1
                .push_str(line);
        }
    }
    steps
}

/// Runs every step; returns the actual transcript.
fn replay(transcript: &str) -> (String, Vec<String>) {
    let scratch = tempfile::tempdir().unwrap();
    copy_dir(&manifest_dir().join("tests/data"), scratch.path());
    let mut actual = String::new();
    let mut mismatches = Vec::new();
    for (cmd, expected) in parse(transcript) {
        let got = run_line(&cmd, scratch.path());
        if got != expected {
            mismatches.push(format!("$ {cmd}\n--- expected\n{expected}--- actual\n{got}"));
        }
        actual.push_str(&format!("$ {cmd}\n{got}"));
    }
    (actual, mismatches)
}

fn check_file(name: &str) {
    let path = manifest_dir().join("tests/golden").join(name);
    let transcript = fs::read_to_string(&path).unwrap();
    let (actual, mismatches) = replay(&transcript);
    if std::env::var_os("VISEMAP_BLESS").is_some() {
        fs::write(&path, actual).unwrap();
        return;
    }
    assert!(mismatches.is_empty(), "{name}:\n{}", mismatches.join("\n"));
}

#[test]
fn catalog() {
    check_file("catalog.txt");
}

#[test]
fn combine() {
    check_file("combine.txt");
}

#[test]
fn derive() {
    check_file("derive.txt");
}

#[test]
fn score() {
    check_file("score.txt");
}

#[test]
fn usage() {
    check_file("usage.txt");
}

/// Every ```console block in the README is a transcript too.
#[test]
fn readme_examples() {
    let readme = fs::read_to_string(manifest_dir().join("../../README.md")).unwrap();
    let mut blocks = Vec::new();
    let mut current: Option<String> = None;
    for line in readme.split_inclusive('\n') {
        match (&mut current, line.trim_end()) {
            (None, "```console") => current = Some(String::new()),
            (Some(_), "```") => blocks.push(current.take().unwrap()),
            (Some(block), _) => block.push_str(line),
            (None, _) => {}
        }
    }
    assert!(!blocks.is_empty(), "README has no console examples");
    for block in blocks {
        let (_, mismatches) = replay(&block);
        assert!(mismatches.is_empty(), "README:\n{}", mismatches.join("\n"));
    }
}
