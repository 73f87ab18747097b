//! End-to-end tests of the `umlprof` binary: exit statuses, report
//! formats, rendering flags, and scaffolding behavior.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use umlprof_core::corpus;
use umlprof_core::model::serialize_model;
use umlprof_core::profile::serialize_profile;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn umlprof(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_umlprof"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn status_of(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

struct TempDir(PathBuf);

impl TempDir {
    fn new(tag: &str) -> Self {
        let path = std::env::temp_dir().join(format!("umlprof-{tag}-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&path);
        std::fs::create_dir_all(&path).expect("temp dir creatable");
        TempDir(path)
    }

    fn path(&self) -> &Path {
        &self.0
    }

    fn file(&self, name: &str, content: &str) -> PathBuf {
        let path = self.0.join(name);
        std::fs::write(&path, content).expect("temp file writable");
        path
    }
}

impl Drop for TempDir {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

#[test]
fn validate_clean_corpus_exits_zero() {
    let dir = corpus_dir();
    let model = dir.join("class_model.xml");
    let profile = dir.join("mia_profile.xml");
    let output = umlprof(&[
        "validate",
        model.to_str().unwrap(),
        "--profile",
        profile.to_str().unwrap(),
        "--mode",
        "strict",
    ]);
    assert_eq!(
        status_of(&output),
        0,
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    assert!(stdout_of(&output).contains("0 errors"));
}

#[test]
fn validate_mutation_exits_one_with_the_code() {
    let temp = TempDir::new("mutation");
    let fixture = corpus::mutation_suite()
        .into_iter()
        .find(|f| f.name == "interface-on-class")
        .expect("fixture exists");
    let model = temp.file("mutated.xml", &serialize_model(&fixture.model));
    let profile = corpus_dir().join("mia_profile.xml");
    let output = umlprof(&[
        "validate",
        model.to_str().unwrap(),
        "--profile",
        profile.to_str().unwrap(),
    ]);
    assert_eq!(status_of(&output), 1);
    let stdout = stdout_of(&output);
    assert_eq!(stdout.matches("E201").count(), 1, "report:\n{stdout}");
    assert!(stdout.contains("1 error"));
}

#[test]
fn uml2_mode_lifts_the_single_stereotype_rule() {
    let temp = TempDir::new("uml2");
    let fixture = corpus::mutation_suite()
        .into_iter()
        .find(|f| f.name == "double-stereotype")
        .expect("fixture exists");
    let model = temp.file("double.xml", &serialize_model(&fixture.model));
    let profile = corpus_dir().join("mia_profile.xml");
    let model_arg = model.to_str().unwrap();
    let profile_arg = profile.to_str().unwrap();

    let strict = umlprof(&[
        "validate",
        model_arg,
        "--profile",
        profile_arg,
        "--mode",
        "strict",
    ]);
    assert_eq!(status_of(&strict), 1);
    assert!(stdout_of(&strict).contains("E202"));

    let uml2 = umlprof(&[
        "validate",
        model_arg,
        "--profile",
        profile_arg,
        "--mode",
        "uml2",
    ]);
    assert_eq!(status_of(&uml2), 0, "stdout: {}", stdout_of(&uml2));
}

#[test]
fn validate_missing_file_exits_two() {
    let output = umlprof(&["validate", "definitely-missing.xml"]);
    assert_eq!(status_of(&output), 2);
    assert!(!output.stderr.is_empty());
    assert!(output.stdout.is_empty());
}

#[test]
fn validate_malformed_model_exits_two() {
    let temp = TempDir::new("malformed");
    let model = temp.file("broken.xml", "<MODEL name='x'><ELEMENTS>");
    let output = umlprof(&["validate", model.to_str().unwrap()]);
    assert_eq!(status_of(&output), 2);
}

#[test]
fn json_format_matches_text_codes() {
    let temp = TempDir::new("json");
    let fixture = corpus::mutation_suite()
        .into_iter()
        .find(|f| f.name == "remove-keywords-association")
        .expect("fixture exists");
    let model = temp.file("mutated.xml", &serialize_model(&fixture.model));
    let profile = corpus_dir().join("mia_profile.xml");
    let model_arg = model.to_str().unwrap();
    let profile_arg = profile.to_str().unwrap();

    let text = umlprof(&[
        "validate",
        model_arg,
        "--profile",
        profile_arg,
        "--format",
        "text",
    ]);
    let json = umlprof(&[
        "validate",
        model_arg,
        "--profile",
        profile_arg,
        "--format",
        "json",
    ]);
    assert_eq!(status_of(&text), 1);
    assert_eq!(status_of(&json), 1);

    let parsed: serde_json::Value = serde_json::from_str(&stdout_of(&json)).expect("valid JSON");
    let array = parsed.as_array().expect("a JSON array");
    let json_codes: Vec<&str> = array.iter().map(|e| e["code"].as_str().unwrap()).collect();
    assert_eq!(json_codes, vec!["E301"]);
    assert!(stdout_of(&text).contains("E301"));
}

#[test]
fn profile_lint_paths() {
    let profile = corpus_dir().join("mia_profile.xml");
    let output = umlprof(&["profile-lint", profile.to_str().unwrap()]);
    assert_eq!(status_of(&output), 0);

    let temp = TempDir::new("lint");
    let mut duplicated = corpus::builtin_profile();
    let copy = duplicated.stereotypes[0].clone();
    duplicated.stereotypes.push(copy);
    let bad = temp.file("dup.xml", &serialize_profile(&duplicated));
    let output = umlprof(&["profile-lint", bad.to_str().unwrap()]);
    assert_eq!(status_of(&output), 1);
    assert!(stdout_of(&output).contains("E101"));

    let empty = temp.file("empty.xml", "");
    let output = umlprof(&["profile-lint", empty.to_str().unwrap()]);
    assert_eq!(status_of(&output), 2);
}

#[test]
fn render_modes_and_failure_paths() {
    let dir = corpus_dir();
    let model = dir.join("class_model.xml");
    let profile = dir.join("mia_profile.xml");
    let model_arg = model.to_str().unwrap();
    let profile_arg = profile.to_str().unwrap();

    let textual = umlprof(&[
        "render",
        model_arg,
        "--profile",
        profile_arg,
        "--diagram",
        "d1",
        "--display",
        "textual",
    ]);
    assert_eq!(status_of(&textual), 0);
    let dot = stdout_of(&textual);
    assert!(dot.contains("<<Patient>>"));
    assert!(dot.starts_with("digraph"));
    assert!(!dot.contains("[icon:"));

    let decoration = umlprof(&[
        "render",
        model_arg,
        "--profile",
        profile_arg,
        "--diagram",
        "d1",
        "--display",
        "decoration",
    ]);
    let dot = stdout_of(&decoration);
    assert!(dot.contains("<<Annotation>>") && dot.contains("[icon:ann16]"));

    let missing = umlprof(&[
        "render",
        model_arg,
        "--profile",
        profile_arg,
        "--diagram",
        "nope",
    ]);
    assert_eq!(status_of(&missing), 2);

    let json = umlprof(&[
        "render",
        model_arg,
        "--profile",
        profile_arg,
        "--diagram",
        "d1",
        "--format",
        "json",
    ]);
    assert_eq!(status_of(&json), 0);
    let parsed: serde_json::Value = serde_json::from_str(&stdout_of(&json)).expect("valid JSON");
    assert_eq!(parsed["kind"], "class");
    assert!(parsed["content"].as_str().unwrap().starts_with("digraph"));
}

#[test]
fn render_defaults_to_textual_display() {
    let dir = corpus_dir();
    let output = umlprof(&[
        "render",
        dir.join("sequence_model.xml").to_str().unwrap(),
        "--profile",
        dir.join("mia_profile.xml").to_str().unwrap(),
        "--diagram",
        "d1",
    ]);
    assert_eq!(status_of(&output), 0);
    assert!(stdout_of(&output).contains("<<Interface>> SearchUI"));
}

#[test]
fn init_scaffolds_a_validatable_project_and_refuses_overwrites() {
    let temp = TempDir::new("init");
    let target = temp.path().join("starter");
    let target_arg = target.to_str().unwrap();

    let first = umlprof(&["init", target_arg]);
    assert_eq!(status_of(&first), 0);
    for name in ["mia_profile.xml", "class_model.xml", "sequence_model.xml"] {
        assert!(target.join(name).exists(), "{name} missing");
    }

    let validate = umlprof(&[
        "validate",
        target.join("class_model.xml").to_str().unwrap(),
        "--profile",
        target.join("mia_profile.xml").to_str().unwrap(),
    ]);
    assert_eq!(status_of(&validate), 0);

    let second = umlprof(&["init", target_arg]);
    assert_eq!(status_of(&second), 2);
}

#[test]
fn usage_errors_exit_two() {
    let output = umlprof(&["validate"]);
    assert_eq!(status_of(&output), 2);
    let output = umlprof(&["no-such-command"]);
    assert_eq!(status_of(&output), 2);
}
