use std::path::{Path, PathBuf};
use std::process::Command;

use ainfty_cli::{parse_spec, parse_spec_in, run_from, CliError, Outcome, SpecDocument};
use cyclic_ainfty::fixtures;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Outcome {
    run_from(std::iter::once("ainfty").chain(args.iter().copied()))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

const LAMBDA_NS: &str = "\
[basis]
1 0
theta 1

[algebra]
convention ns
max_arity 3
1 1 -> 1 : 1
1 theta -> theta : 1
theta 1 -> theta : 1

[pairing]
alpha -1
1 theta : 1
theta 1 : -1
";

#[test]
fn check_cyclic_on_lambda_theta() {
    let out = run(&[
        "check-cyclic",
        "--max-arity",
        "3",
        &fixture("lambda_theta.spec"),
    ]);
    assert_eq!(out.code, 0, "{}", out.report);
    assert!(out.report.contains("cyclic symmetry: PASS"));
}

#[test]
fn compare_potential_prints_zero_difference() {
    let out = run(&[
        "compare-potential",
        "--max-arity",
        "4",
        &fixture("A.spec"),
        &fixture("B.spec"),
        &fixture("h.spec"),
    ]);
    assert_eq!(out.code, 0, "{}", out.report);
    assert!(
        out.report.lines().any(|l| l == "difference = 0"),
        "{}",
        out.report
    );
}

#[test]
fn cyclicize_then_check_cyclic() {
    let dir = tempfile::tempdir().unwrap();
    let b = dir.path().join("B.spec").display().to_string();
    let out = run(&[
        "cyclicize",
        "--max-arity",
        "3",
        &fixture("noncyclic_phi.spec"),
        "--out",
        &b,
    ]);
    assert_eq!(out.code, 0, "{}", out.report);
    let out = run(&["check-cyclic", "--max-arity", "3", &b]);
    assert_eq!(out.code, 0, "{}", out.report);
    let out = run(&["check-ainfty", "--max-arity", "3", &b]);
    assert_eq!(out.code, 0, "{}", out.report);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_ainfty");
    let ok = Command::new(bin)
        .args([
            "check-cyclic",
            "--max-arity",
            "3",
            &fixture("lambda_theta.spec"),
        ])
        .status()
        .unwrap();
    assert_eq!(ok.code(), Some(0));
    let missing = Command::new(bin)
        .args(["check-cyclic", &fixture("lambda_theta.spec")])
        .status()
        .unwrap();
    assert_eq!(missing.code(), Some(2));
    let bad_flag = Command::new(bin)
        .args(["check-cyclic", "--bogus"])
        .output()
        .unwrap();
    assert_eq!(bad_flag.status.code(), Some(2));
}

#[test]
fn failing_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture("lambda_theta.spec"))
        .unwrap()
        .replace("theta 1 -> theta : -1", "theta 1 -> theta : 1");
    let p = write(dir.path(), "bad.spec", &text);
    let out = run(&["check-ainfty", "--max-arity", "3", &p]);
    assert_eq!(out.code, 1, "{}", out.report);
    assert!(out.report.contains("FAIL"));
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let commands: Vec<Vec<String>> = vec![
        vec![
            "compare-potential".into(),
            "--max-arity".into(),
            "4".into(),
            fixture("A.spec"),
            fixture("B.spec"),
            fixture("h.spec"),
        ],
        vec![
            "potential".into(),
            "--max-arity".into(),
            "3".into(),
            fixture("B.spec"),
        ],
        vec![
            "cyclicize".into(),
            "--max-arity".into(),
            "3".into(),
            fixture("noncyclic_phi.spec"),
        ],
        vec![
            "compare-filtered-potential".into(),
            "--max-arity".into(),
            "2".into(),
            fixture("filtered_source.spec"),
            fixture("filtered_target.spec"),
            fixture("filtered_h.spec"),
        ],
    ];
    for args in commands {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = run(&args);
        let second = run(&args);
        assert_eq!(first, second);
        assert_eq!(first.code, 0, "{}", first.report);
    }
    let b1 = dir.path().join("b1.spec").display().to_string();
    let b2 = dir.path().join("b2.spec").display().to_string();
    run(&[
        "cyclicize",
        "--max-arity",
        "3",
        &fixture("noncyclic_phi.spec"),
        "--out",
        &b1,
    ]);
    run(&[
        "cyclicize",
        "--max-arity",
        "3",
        &fixture("noncyclic_phi.spec"),
        "--out",
        &b2,
    ]);
    assert_eq!(std::fs::read(b1).unwrap(), std::fs::read(b2).unwrap());
}

#[test]
fn ns_input_is_converted_with_a_note() {
    let doc = parse_spec(LAMBDA_NS).unwrap();
    assert!(doc.converted);
    let (a, _) = fixtures::lambda_theta(1, 3);
    assert_eq!(doc.algebra, Some(a));
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "ns.spec", LAMBDA_NS);
    let out = run(&["check-cyclic", "--max-arity", "3", &p]);
    assert_eq!(out.code, 0, "{}", out.report);
    assert!(out.report.contains("converted from the ns convention"));
}

#[test]
fn parse_errors_are_located() {
    let text = LAMBDA_NS.replace("theta 1 -> theta : 1", "theta 1 -> theta : one");
    match parse_spec(&text) {
        Err(CliError::Parse(e)) => {
            assert_eq!(e.line, 10);
            assert_eq!(e.column, 20);
        }
        other => panic!("{other:?}"),
    }
    let text = LAMBDA_NS.replace("theta 1 -> theta : 1", "theta 1 -> phi : 1");
    match parse_spec(&text) {
        Err(CliError::Parse(e)) => assert_eq!((e.line, e.column), (10, 12)),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_spec("[nonsense]\n"), Err(CliError::Parse(e)) if e.line == 1));
}

#[test]
fn degree_rule_violations_quote_the_rule() {
    let text = LAMBDA_NS.replace("theta 1 -> theta : 1", "theta 1 -> 1 : 1");
    let err = parse_spec(&text).unwrap_err().to_string();
    assert!(err.contains("line 10"), "{err}");
    assert!(
        err.contains("the rule is: m_k(x_1..x_k) has shifted degree 1 + Σ|x_i|'"),
        "{err}"
    );
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "bad.spec", &text);
    assert_eq!(run(&["check-ainfty", "--max-arity", "3", &p]).code, 2);
}

#[test]
fn filtered_energies_must_come_from_the_generators() {
    let text = std::fs::read_to_string(fixture("filtered_h.spec")).unwrap();
    let source =
        parse_spec(&std::fs::read_to_string(fixture("filtered_source.spec")).unwrap()).unwrap();
    let ctx = SpecDocument {
        basis: source.basis.clone(),
        ..SpecDocument::default()
    };
    assert!(parse_spec_in(&text, &ctx).is_ok());
    let bad = text.replace("T^0 e^0", "T^1/3 e^0");
    assert!(matches!(parse_spec_in(&bad, &ctx), Err(CliError::Parse(_))));
}

#[test]
fn minimal_zero_algebra_passes() {
    for cmd in ["check-ainfty", "check-cyclic"] {
        let out = run(&[cmd, "--max-arity", "3", &fixture("zero.spec")]);
        assert_eq!(out.code, 0, "{}", out.report);
    }
}

#[test]
fn constructions_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("D.spec").display().to_string();
    let out = run(&[
        "cyclicize-bimodule",
        "--max-arity",
        "3",
        &fixture("bimodule.spec"),
        "--out",
        &d,
    ]);
    assert_eq!(out.code, 0, "{}", out.report);
    let h = dir.path().join("H.spec").display().to_string();
    let out = run(&[
        "transfer",
        "--max-arity",
        "3",
        &fixture("B.spec"),
        "--out",
        &h,
    ]);
    assert_eq!(out.code, 0, "{}", out.report);
    for p in [d, h] {
        let text = std::fs::read_to_string(&p).unwrap();
        let doc = parse_spec(&text).unwrap();
        assert_eq!(ainfty_cli::emit_spec(&doc), text);
    }
}

#[test]
fn filtered_commands() {
    let (s, t, h) = (
        fixture("filtered_source.spec"),
        fixture("filtered_target.spec"),
        fixture("filtered_h.spec"),
    );
    for args in [
        vec!["check-filtered-ainfty", "--max-arity", "2", &s],
        vec!["check-filtered-cyclic", "--max-arity", "2", &t],
        vec!["check-filtered-morphism", "--max-arity", "2", &s, &t, &h],
        vec![
            "check-filtered-cyclic-morphism",
            "--max-arity",
            "2",
            &s,
            &t,
            &h,
        ],
        vec!["filtered-potential", "--max-arity", "2", &t],
        vec![
            "check-filtered-ainfty",
            "--max-arity",
            "3",
            "--energy-cap",
            "1",
            &fixture("lambda_theta.spec"),
        ],
    ] {
        let out = run(&args);
        assert_eq!(out.code, 0, "{}", out.report);
    }
    let out = run(&[
        "check-filtered-ainfty",
        "--max-arity",
        "3",
        &fixture("lambda_theta.spec"),
    ]);
    assert_eq!(out.code, 2);
}
