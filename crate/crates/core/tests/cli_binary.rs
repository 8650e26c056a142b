//! Drives the installed binary end to end and pins the outward
//! contract: exit codes (0 proven/verified/match, 1 not proven/invalid,
//! 2 usage), the verbosity-0 machine words, and the certificate file
//! round trip between `prove` and `verify`.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mtp-prover"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn prove_emits_machine_word_and_exit_zero() {
    let out = run(&["-v", "0", "prove", "x - sin(x)"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_of(&out), "proven\n");
}

#[test]
fn disproof_emits_machine_word_and_exit_one() {
    let out = run(&["-v", "0", "prove", "sin(x) - x"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_of(&out), "disproven\n");
}

#[test]
fn syntax_error_reports_usage_on_stderr_and_exit_two() {
    let out = run(&["prove", "x +"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
}

#[test]
fn certificate_file_round_trips_through_verify() {
    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("cert.json");
    let path_str = path.to_str().unwrap();

    let out = run(&["-v", "0", "prove", "x - sin(x)", "--certificate", path_str]);
    assert_eq!(out.status.code(), Some(0));
    assert!(path.exists());

    let out = run(&["-v", "0", "verify", path_str]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_of(&out), "verified\n");

    tamper(&path);
    let out = run(&["-v", "0", "verify", path_str]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_of(&out), "invalid\n");
}

/// Swaps the recorded inequality for a different one, leaving every
/// other field untouched; re-derivation must notice.
fn tamper(path: &Path) {
    let text = std::fs::read_to_string(path).expect("certificate readable");
    let tampered = text.replace("x - sin(x)", "x - sin(x)^3");
    assert_ne!(tampered, text, "tamper target not found");
    std::fs::write(path, tampered).expect("certificate writable");
}

#[test]
fn verify_rejects_unreadable_and_malformed_files() {
    let out = run(&["verify", "/nonexistent/cert.json"]);
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("garbage.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = run(&["-v", "0", "verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_of(&out), "invalid\n");
}

#[test]
fn parametric_prove_with_range_and_rational_upper() {
    let out = run(&[
        "-v",
        "0",
        "prove",
        "sin(x) - a*x",
        "--param",
        "a=1/3..3/5",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout_of(&out));
    assert_eq!(stdout_of(&out), "proven\n");

    let out = run(&["-v", "0", "prove", "x - sin(x)", "--upper", "3/2"]);
    assert_eq!(out.status.code(), Some(0));

    // Upper endpoints at or beyond pi/2 cannot be admitted as rationals.
    let out = run(&["prove", "x - sin(x)", "--upper", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reproduce_matches_goldens_and_rejects_unknown_cases() {
    let out = run(&["-v", "0", "reproduce", "mortici"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout_of(&out));
    assert_eq!(stdout_of(&out), "match\n");

    let out = run(&["reproduce", "no-such-case"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("available:"));
}
