use std::process::Command;

use hkorbits::cli_reports::{CheckReport, Status};

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hkorbits")).args(args).output().expect("spawn hkorbits");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn reports(stdout: &str) -> Vec<CheckReport> {
    stdout.lines().map(|l| serde_json::from_str(l).unwrap_or_else(|e| panic!("{e}: {l}"))).collect()
}

fn value(r: &CheckReport, name: &str) -> f64 {
    r.values.iter().find(|v| v.name == name).unwrap_or_else(|| panic!("no value {name}")).value.0
}

#[test]
fn help_and_argument_errors() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("check-hk") && out.contains("standard-form"));
    assert_eq!(run(&["no-such-command"]).0, 2);
    assert_eq!(run(&["invariants", "--algebra", "sl", "--n", "6", "--orbit", "2,2,2"]).0, 2);
    let (code, _, err) = run(&["potential", "--family", "so7", "--params", "1,1,1", "--c", "-1"]);
    assert_eq!(code, 2);
    assert!(err.contains("error"));
    assert_eq!(run(&["verify-triples", "--algebra", "sl", "--n", "6", "--orbit", "4,2"]).0, 2);
}

#[test]
fn so7_potential_at_unit_point() {
    let (code, out, _) = run(&["potential", "--family", "so7", "--params", "1,1,1", "--c", "0", "--json"]);
    assert_eq!(code, 0);
    let r = &reports(&out)[0];
    // at r = s = t = 1, c = 0 the potential is sqrt(1000)
    assert!((value(r, "rho") - 1000f64.sqrt()).abs() < 1e-10);
    assert_eq!(r.status, Status::Pass);
}

#[test]
fn generic_potential_needs_algebra_and_agrees() {
    let (code, out, _) =
        run(&["potential", "--family", "generic", "--algebra", "sp", "--n", "3", "--params", "0.5,1.2,2.0", "--json"]);
    assert_eq!(code, 0);
    let r = &reports(&out)[0];
    assert!((value(r, "rho") - 8.0 * 3.7).abs() < 1e-12);
    assert_eq!(run(&["potential", "--family", "generic", "--params", "1,2,3"]).0, 2);
}

#[test]
fn triples_and_invariants() {
    for (alg, n, orbit) in [("sl", "7", "2,2,2"), ("so", "13", "2,2,2,2,2,2"), ("sp", "4", "2,2,2"), ("sl", "6", "3")] {
        let (code, out, err) = run(&["verify-triples", "--algebra", alg, "--n", n, "--orbit", orbit]);
        assert_eq!(code, 0, "{out}{err}");
    }
    let (code, out, _) = run(&["invariants", "--algebra", "so", "--n", "7", "--orbit", "3,2,2", "--params", "0.6,1.1,1.7", "--json"]);
    assert_eq!(code, 0);
    let r = &reports(&out)[0];
    assert_eq!(r.residuals.len(), 6);
    assert!((value(r, "eta1") - (20.0 * 0.36 + 10.0 * 1.21 + 10.0 * 2.89)).abs() < 1e-10);
}

#[test]
fn check_hk_reports_and_determinism() {
    let args = ["check-hk", "--algebra", "sp", "--n", "3", "--orbit", "2,2,2", "--params", "0.7,1.3,2.1", "--c", "0.5", "--json", "--seed", "5"];
    let (code, out, _) = run(&args);
    assert_eq!(code, 0, "{out}");
    let rs = reports(&out);
    assert_eq!(rs.len(), 2);
    assert!(rs.iter().all(|r| r.status == Status::Pass));
    assert_eq!(run(&args).1, out);
}

#[test]
fn obstruction_shows_as_failure() {
    let (code, out, _) =
        run(&["check-hk", "--algebra", "sl", "--n", "7", "--orbit", "2,2,2,1", "--params", "0.3,0.8,1.9", "--c", "0.5"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("[FAIL] check-hk"));
}

#[test]
fn pde_and_cohomogeneity() {
    let (code, out, _) = run(&["pde-so7", "--params", "0.6,1.1,1.7", "--c", "2"]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = run(&["cohomogeneity", "--algebra", "so", "--n", "7", "--orbit", "3,2,2", "--samples", "3", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(value(&reports(&out)[0], "cohomogeneity"), 3.0);
}

#[test]
fn tables() {
    let (code, out, _) = run(&["tables", "--kind", "ksquared", "--json"]);
    assert_eq!(code, 0);
    let rs = reports(&out);
    assert_eq!(rs.iter().filter(|r| r.status == Status::Skipped).count(), 5);
    assert!(rs.iter().all(|r| r.status != Status::Fail));
    let (code, out, _) = run(&["tables", "--kind", "height3"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(run(&["tables"]).0, 2);
}

#[test]
fn standard_forms() {
    for kind in ["symmetric", "skew", "general"] {
        let (code, out, _) = run(&["standard-form", "--kind", kind, "--n", "6", "--json"]);
        assert_eq!(code, 0, "{out}");
        assert_eq!(reports(&out).len(), 2);
    }
}
