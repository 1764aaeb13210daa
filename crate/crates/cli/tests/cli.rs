use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn visemap(cwd: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_visemap"))
        .args(args)
        .current_dir(cwd)
        .env_remove("VISEMAP_CATALOG")
        .output()
        .unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const EXTRA_MAP: &str = "# id: lips-only\n# citation: test\n# coverage: consonant\n# excluded:\nV01: p b m\n";

#[test]
fn extra_catalog_directory_is_merged() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("lips-only.map"), EXTRA_MAP).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_visemap"))
        .args(["cf", "lips-only"])
        .env("VISEMAP_CATALOG", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(out.stdout, b"V=1 P=3 CF=0.333\n");

    let listed = Command::new(env!("CARGO_BIN_EXE_visemap"))
        .args(["list", "--coverage", "consonant"])
        .env("VISEMAP_CATALOG", dir.path())
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(listed.stdout).unwrap().lines().count(), 16);
}

#[test]
fn duplicate_catalog_id_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let dup = EXTRA_MAP.replace("lips-only", "lee-vowels");
    fs::write(dir.path().join("lee-vowels.map"), dup).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_visemap"))
        .args(["list"])
        .env("VISEMAP_CATALOG", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("DuplicateMapId"), "{}", stderr(&out));
}

#[test]
fn output_file_is_replaced_whole() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.map");
    fs::write(
        &target,
        "stale contents that are longer than nothing\n".repeat(100),
    )
    .unwrap();
    let out = visemap(
        dir.path(),
        &[
            "combine",
            "--consonants",
            "lee-consonants",
            "--vowels",
            "lee-vowels",
            "-o",
            "out.map",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let written = fs::read_to_string(&target).unwrap();
    assert!(written.starts_with("# id: lee-consonants+lee-vowels\n"));
    let names: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(names, ["out.map"], "temporary files left behind");
}

#[test]
fn failed_command_leaves_output_untouched() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("out.map"), "keep\n").unwrap();
    let out = visemap(
        dir.path(),
        &[
            "combine",
            "--consonants",
            "lee-vowels",
            "--vowels",
            "lee-vowels",
            "-o",
            "out.map",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(fs::read_to_string(dir.path().join("out.map")).unwrap(), "keep\n");
}

#[test]
fn malformed_matrix_reports_kind() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.csv"), ",a,b\na,1,2\nb,3\n").unwrap();
    let out = visemap(dir.path(), &["graph", "--confusions", "bad.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).starts_with("error[ShapeError]: bad.csv:"),
        "{}",
        stderr(&out)
    );

    let out = visemap(dir.path(), &["graph", "--confusions", "missing.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).starts_with("error[IoError]: missing.csv:"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn split_mode_needs_known_phonemes() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("m.csv"), ",p,zz\np,3,1\nzz,1,3\n").unwrap();
    let mixed = visemap(
        dir.path(),
        &[
            "derive",
            "--confusions",
            "m.csv",
            "--stage",
            "tight",
            "--classes",
            "mixed",
        ],
    );
    assert!(mixed.status.success());
    let split = visemap(
        dir.path(),
        &[
            "derive",
            "--confusions",
            "m.csv",
            "--stage",
            "tight",
            "--classes",
            "split",
        ],
    );
    assert_eq!(split.status.code(), Some(1));
    assert!(stderr(&split).contains("UnknownPhoneme"));
}

#[test]
fn repeated_runs_are_identical() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let args = [
        "derive",
        "--confusions",
        "confusions.csv",
        "--stage",
        "loose",
        "--classes",
        "mixed",
    ];
    let first = visemap(&data, &args);
    for _ in 0..5 {
        assert_eq!(visemap(&data, &args).stdout, first.stdout);
    }
}

#[test]
fn help_exits_zero() {
    let out = visemap(Path::new("."), &["--help"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("sweep"));
}
