//! Helpers shared by the golden-file tests and the acceptance harness.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

pub const BIN: &str = env!("CARGO_BIN_EXE_relcat");

pub fn examples_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus/examples")
}

fn is_expectation(name: &str) -> bool {
    name.starts_with("expected")
}

pub fn files_under(root: &Path) -> BTreeSet<PathBuf> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeSet<PathBuf>) {
        for entry in fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                walk(root, &path, out);
            } else {
                out.insert(path.strip_prefix(root).unwrap().to_path_buf());
            }
        }
    }
    let mut out = BTreeSet::new();
    if root.is_dir() {
        walk(root, root, &mut out);
    }
    out
}

pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
    pub created: Vec<(PathBuf, String)>,
    pub scratch: tempfile::TempDir,
}

pub fn run_example(dir: &Path) -> Outcome {
    let scratch = tempfile::tempdir().unwrap();
    let mut inputs = BTreeSet::new();
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        if path.is_file() && !is_expectation(&name) {
            fs::copy(&path, scratch.path().join(&name)).unwrap();
            inputs.insert(PathBuf::from(name));
        }
    }
    let args = fs::read_to_string(dir.join("args")).unwrap();
    let out = Command::new(BIN)
        .args(args.split_whitespace())
        .current_dir(scratch.path())
        .output()
        .unwrap();
    let created = files_under(scratch.path())
        .into_iter()
        .filter(|p| !inputs.contains(p))
        .map(|p| {
            let text = fs::read_to_string(scratch.path().join(&p)).unwrap();
            (p, text)
        })
        .collect();
    Outcome {
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
        code: out.status.code().expect("relcat exited by signal"),
        created,
        scratch,
    }
}

pub fn example_dirs() -> Vec<PathBuf> {
    let mut dirs: Vec<PathBuf> = fs::read_dir(examples_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.join("args").is_file())
        .collect();
    dirs.sort();
    dirs
}

pub fn update(dir: &Path, got: &Outcome) {
    fs::write(dir.join("expected.stdout"), &got.stdout).unwrap();
    fs::write(dir.join("expected.stderr"), &got.stderr).unwrap();
    fs::write(dir.join("expected.code"), format!("{}\n", got.code)).unwrap();
    let expected = dir.join("expected");
    if expected.is_dir() {
        fs::remove_dir_all(&expected).unwrap();
    }
    for (rel, text) in &got.created {
        let target = expected.join(rel);
        fs::create_dir_all(target.parent().unwrap()).unwrap();
        fs::write(target, text).unwrap();
    }
}

pub fn compare(dir: &Path, got: &Outcome) -> Vec<String> {
    let name = dir.file_name().unwrap().to_string_lossy();
    let read = |f: &str| fs::read_to_string(dir.join(f)).unwrap_or_else(|_| panic!("{name}: missing {f}"));
    let mut diffs = Vec::new();
    if read("expected.stdout") != got.stdout {
        diffs.push(format!("{name}: stdout differs\n--- got\n{}", got.stdout));
    }
    if read("expected.stderr") != got.stderr {
        diffs.push(format!("{name}: stderr differs\n--- got\n{}", got.stderr));
    }
    let code: i32 = read("expected.code").trim().parse().unwrap();
    if code != got.code {
        diffs.push(format!("{name}: exit code {} != expected {code}", got.code));
    }
    let expected_dir = dir.join("expected");
    let expected_files = files_under(&expected_dir);
    let got_files: BTreeSet<PathBuf> = got.created.iter().map(|(p, _)| p.clone()).collect();
    if expected_files != got_files {
        diffs.push(format!(
            "{name}: created files {got_files:?} != expected {expected_files:?}"
        ));
    }
    for (rel, text) in &got.created {
        if let Ok(want) = fs::read_to_string(expected_dir.join(rel)) {
            if &want != text {
                diffs.push(format!("{name}: {} differs", rel.display()));
            }
        }
    }
    diffs
}

/// Replays every witness an outcome created; returns how many reproduced
/// and the paths that did not.
pub fn replay_witnesses(got: &Outcome, model: &[&str]) -> (usize, Vec<PathBuf>) {
    let mut ok = 0;
    let mut bad = Vec::new();
    for (w, _) in got
        .created
        .iter()
        .filter(|(p, _)| p.extension().is_some_and(|e| e == "witness"))
    {
        let out = Command::new(BIN)
            .arg("replay")
            .arg(w)
            .args(model)
            .current_dir(got.scratch.path())
            .output()
            .unwrap();
        if out.status.code() == Some(0) {
            ok += 1;
        } else {
            bad.push(w.clone());
        }
    }
    (ok, bad)
}

/// The `--model rel` or `--rig NAME` pair from an `args` file.
pub fn model_flags(args: &str) -> Vec<String> {
    let words: Vec<&str> = args.split_whitespace().collect();
    words
        .windows(2)
        .find(|w| w[0] == "--model" || w[0] == "--rig")
        .map(|w| w.iter().map(|s| s.to_string()).collect())
        .unwrap_or_default()
}
