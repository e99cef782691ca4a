use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gauge2_cli::report::{emit_report, parse_records, Format};
use gauge2_cli::scenario::{parse_scenario, parse_scenario_in};
use gauge2_cli::suite::{run_suite, Suite, SuiteError};
use proptest::prelude::*;

fn demo(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn gauge2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gauge2")).args(args).output().unwrap()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gauge2-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

const SMALL: &str = "module poincare2\ndim 5\nn 1\ntrials 2\nA J1 : 1 x2 dx1\nB P1 : 1 x4 dx3 dx5\n";

#[test]
fn text_report_for_a_passing_suite() {
    let out = gauge2(&[
        "--scenario",
        demo("poincare2.scenario").to_str().unwrap(),
        "--suite",
        "closedness",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("gauge2 report: scenario poincare2 seed 11"));
    assert!(
        text.contains("CHECK closedness/d-p-form n=1 module=poincare2 seed=11 data=conn1 : PASS residual_terms=0\n")
    );
    assert!(
        text.lines().last().unwrap().starts_with("OVERALL PASS (7 checks)"),
        "{text}"
    );
}

#[test]
fn seed_and_trials_flags_override_the_scenario() {
    let path = demo("poincare2.scenario");
    let out = gauge2(&[
        "--scenario",
        path.to_str().unwrap(),
        "--suite",
        "bianchi",
        "--seed",
        "3",
        "--trials",
        "1",
        "--format",
        "records",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("kind=header;scenario=poincare2;n=1;seed=3\n"));
    let summary = parse_records(&text).unwrap();
    // conn1, conn0 and one random trial, two identities each.
    assert_eq!(summary.entries.len(), 6);
    assert!(summary.passed);
}

#[test]
fn out_flag_writes_the_report() {
    let target = scratch("report.txt", "");
    let out = gauge2(&[
        "--scenario",
        demo("heisenberg.scenario").to_str().unwrap(),
        "--suite",
        "eom",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&target).unwrap();
    assert!(text.contains("EOM g[X] : NONZERO(1)"));
    assert!(text.contains("EOM g[Y] : ZERO"));
    assert!(text.contains("ACTION value : -1/4"));
}

#[test]
fn boundary_suite_lists_every_face() {
    let out = gauge2(&[
        "--scenario",
        demo("poincare2_action.scenario").to_str().unwrap(),
        "--suite",
        "boundary",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let faces: Vec<&str> = text.lines().filter(|l| l.starts_with("BOUNDARY face")).collect();
    assert_eq!(faces.len(), 8);
    assert_eq!(faces[0], "BOUNDARY face x1=0 : ZERO");
    assert_eq!(faces[1], "BOUNDARY face x1=1 : NONZERO");
}

#[test]
fn parse_errors_exit_with_two_and_a_location() {
    let path = scratch("bad.scenario", "module poincare2\ndim 5\nn 1\nA J9 : 1 x2 dx1\n");
    let out = gauge2(&["--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 4, column 3: unknown basis label J9"), "{err}");
}

#[test]
fn usage_errors_exit_with_two() {
    let path = scratch("small.scenario", SMALL);
    let p = path.to_str().unwrap();
    assert_eq!(
        gauge2(&["--scenario", p, "--suite", "everything"]).status.code(),
        Some(2)
    );
    assert_eq!(gauge2(&["--scenario", p, "--format", "json"]).status.code(), Some(2));
    assert_eq!(gauge2(&["--suite", "all"]).status.code(), Some(2));
    assert_eq!(
        gauge2(&["--scenario", "/nonexistent/x.scenario"]).status.code(),
        Some(2)
    );
    // chern-weil needs a second connection.
    let out = gauge2(&["--scenario", p, "--suite", "chern-weil"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("[conn0]"));
}

#[test]
fn failing_checks_exit_with_one_and_show_a_witness() {
    // An abelian module with a pairing that is not α-symmetric.
    let alg = scratch(
        "skew.alg",
        "name skew\n[g]\nbasis X Y\n[h]\nbasis V W\n[alpha]\nX V = 1\nY W = 1\n[action]\n[pairing n=1]\nX W = 1\n",
    );
    let scenario = scratch("skew.scenario", "module file skew.alg\ndim 3\nn 1\nA X : 1 dx1\n");
    let out = gauge2(&["--scenario", scenario.to_str().unwrap(), "--suite", "axioms"]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains(": FAIL residual_terms="), "{text}");
    assert!(text.contains("  witness "));
    assert!(text.trim_end().starts_with("gauge2 report") && text.contains("OVERALL FAIL"));
    drop(alg);
}

#[test]
fn all_skips_chern_weil_without_a_second_connection() {
    let s = parse_scenario(SMALL).unwrap();
    let report = run_suite(&s, Suite::All).unwrap();
    assert!(report.passed());
    assert!(report.entries.iter().all(|e| e.suite != "chern-weil"));
    assert!(matches!(
        run_suite(&s, Suite::ChernWeil),
        Err(SuiteError::Requirement(_))
    ));
}

#[test]
fn every_suite_runs_on_the_demos() {
    for file in ["poincare2.scenario", "heisenberg.scenario"] {
        let path = demo(file);
        let s = parse_scenario_in(&std::fs::read_to_string(&path).unwrap(), path.parent().unwrap()).unwrap();
        for name in Suite::NAMES {
            let suite: Suite = name.parse().unwrap();
            if suite == Suite::ChernWeil && s.conn0.is_none() {
                continue;
            }
            let report = run_suite(&s, suite).unwrap();
            assert!(report.passed(), "{file} {name}");
            assert!(!report.entries.is_empty() || !report.notes.is_empty(), "{file} {name}");
        }
    }
}

#[test]
fn proof_steps_suite_checks_only_the_combined_action_terms() {
    let s = parse_scenario(SMALL).unwrap();
    let report = run_suite(&s, Suite::ProofSteps).unwrap();
    let names: Vec<&str> = report.entries.iter().map(|e| e.name.as_str()).collect();
    assert!(names.contains(&"combined-action-terms"));
    assert!(!names.contains(&"action-term") && !names.contains(&"curvature-action-term"));
    assert!(!names.contains(&"bianchi-alpha-term"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn records_round_trip_and_are_seed_deterministic(seed in any::<u64>()) {
        let mut s = parse_scenario(SMALL).unwrap();
        s.seed = seed;
        let first = run_suite(&s, Suite::GaugeInvariance).unwrap();
        let second = run_suite(&s, Suite::GaugeInvariance).unwrap();
        let records = emit_report(&first, Format::Records);
        prop_assert_eq!(&records, &emit_report(&second, Format::Records));
        prop_assert_eq!(parse_records(&records).unwrap(), first.summary());
    }
}
