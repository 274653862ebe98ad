//! Runs the `daelim` binary on the bundled systems.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use daelim_cli::report::{EliminateAllReport, EliminationReport, ReduceReport, TargetReport, VerifyReport};
use daelim_core::dsl::{parse_system, render_system, DaeSystem};
use daelim_core::elim::{differential_algebraic_resultant, EliminationConfig};
use daelim_core::Polynomial;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name)
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn daelim(args: &[&str]) -> Output {
    daelim_env(args, &[])
}

fn daelim_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_daelim"));
    cmd.args(args).env_remove("DAELIM_MAX_DIFF");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn load(name: &str) -> DaeSystem {
    parse_system(&std::fs::read_to_string(corpus(name)).unwrap()).unwrap()
}

fn parse_in(sys: &DaeSystem, expr: &str) -> Polynomial {
    let src = format!("{}\neq {expr} = 0", render_system(sys));
    parse_system(&src).unwrap().equations.pop().unwrap().poly
}

#[test]
fn reduce_reports_differentiation_times() {
    let o = daelim(&["reduce", path(&corpus("gear.dae")), "--target", "y1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("upsilon: (0, 1)"), "{text}");
    assert!(text.contains("weak index: 1"), "{text}");
    assert!(text.contains("D(f2): "), "{text}");

    let o = daelim(&["reduce", path(&corpus("pendulum.dae")), "--target", "y2", "--json"]);
    let r: ReduceReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((r.upsilon, r.weak_index), (vec![0, 0, 2], 2));
    assert_eq!(r.enlarged.len(), 5);
}

#[test]
fn eliminate_gear_prints_the_resultant() {
    let o = daelim(&["eliminate", path(&corpus("gear.dae")), "--keep", "y2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: EliminationReport = serde_json::from_slice(&o.stdout).unwrap();
    let sys = load("gear.dae");
    let got = parse_in(&sys, &r.resultant);
    let want = parse_in(&sys, "y2 - p1 + D(p2,1)");
    assert!(got.rational_multiple_of(&want).is_some(), "{}", r.resultant);
    assert_eq!((r.matrix_rows, r.matrix_cols), (1, 1));
    assert!(r.matrix.is_none());
}

#[test]
fn json_resultant_round_trips() {
    for (file, keep) in [("pendulum.dae", "y1"), ("lgy.dae", "y2"), ("gear.dae", "y1")] {
        let o = daelim(&["eliminate", path(&corpus(file)), "--keep", keep, "--json"]);
        let r: EliminationReport = serde_json::from_slice(&o.stdout).unwrap();
        let sys = load(file);
        let internal =
            differential_algebraic_resultant(&sys, sys.lookup_dependent(keep), &EliminationConfig::default())
                .unwrap()
                .resultant;
        assert_eq!(parse_in(&sys, &r.resultant), internal, "{file} {keep}");
    }
}

#[test]
fn show_matrix_dumps_labelled_matrix() {
    let o = daelim(&[
        "eliminate",
        path(&corpus("pendulum.dae")),
        "--keep",
        "y2",
        "--show-matrix",
        "--json",
    ]);
    let r: EliminationReport = serde_json::from_slice(&o.stdout).unwrap();
    let m = r.matrix.unwrap();
    assert_eq!((m.rows.len(), m.cols.len()), (r.matrix_rows, r.matrix_cols));
    assert_eq!((r.matrix_rows, r.matrix_cols), (7, 7));
    assert!(m.entries.iter().all(|row| row.len() == 7));
    let text = stdout(&daelim(&[
        "eliminate",
        path(&corpus("pendulum.dae")),
        "--keep",
        "y2",
        "--show-matrix",
    ]));
    assert!(text.contains("matrix: 7x7") && text.contains("bar(y1)"), "{text}");
}

#[test]
fn predator_prey_matrix_size() {
    let o = daelim(&["eliminate", path(&corpus("predator.dae")), "--keep", "y1", "--json"]);
    let r: EliminationReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((r.matrix_rows, r.matrix_cols), (5, 5));
}

#[test]
fn exit_codes_follow_the_error_taxonomy() {
    let pendulum = corpus("pendulum.dae");
    let missing = daelim(&["reduce", "does-not-exist.dae"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("does-not-exist.dae"));

    let bad = scratch("bad.dae", "system bad\nvar y\neq y^t = 0\n");
    assert_eq!(daelim(&["reduce", path(&bad)]).status.code(), Some(1));

    let unknown = daelim(&["eliminate", path(&pendulum), "--keep", "nope", "--json"]);
    assert_eq!(unknown.status.code(), Some(1));
    assert!(unknown.stdout.is_empty());

    let stuck = daelim(&["eliminate", path(&pendulum), "--keep", "lambda", "--json"]);
    assert_eq!(stuck.status.code(), Some(2));
    assert!(stuck.stdout.is_empty());

    let budget = daelim_env(
        &["reduce", path(&pendulum), "--target", "y1"],
        &[("DAELIM_MAX_DIFF", "1")],
    );
    assert_eq!(budget.status.code(), Some(2));
    let invalid = daelim_env(&["reduce", path(&pendulum)], &[("DAELIM_MAX_DIFF", "many")]);
    assert_eq!(invalid.status.code(), Some(1));

    let degenerate = scratch(
        "degenerate.dae",
        "system degenerate\nvar y1, y2\neq y1 = y2\neq 2*y1 = 2*y2\n",
    );
    let vanishes = daelim(&["eliminate", path(&degenerate), "--keep", "y1", "--json"]);
    assert_eq!(vanishes.status.code(), Some(4));
    assert!(vanishes.stdout.is_empty());

    assert_eq!(daelim(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(daelim(&["--help"]).status.code(), Some(0));
}

#[test]
fn eliminate_all_reports_each_target() {
    let o = daelim(&["eliminate-all", path(&corpus("pendulum.dae")), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: EliminateAllReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r.results.len(), 3);
    assert!(matches!(&r.results[0], TargetReport::Ok(e) if e.kept == "y1"));
    assert!(matches!(&r.results[1], TargetReport::Ok(e) if e.kept == "y2"));
    assert!(matches!(&r.results[2], TargetReport::Failed(f) if f.kept == "lambda" && f.exit_code == 2));
}

fn verify(system: &str, keep: &str, trajectory: &Path) -> (Option<i32>, Option<VerifyReport>) {
    let o = daelim(&[
        "verify",
        path(&corpus(system)),
        "--keep",
        keep,
        "--trajectory",
        path(trajectory),
        "--json",
    ]);
    (o.status.code(), serde_json::from_slice(&o.stdout).ok())
}

#[test]
fn verify_accepts_true_solutions() {
    for keep in ["y1", "y2"] {
        let (code, r) = verify("gear.dae", keep, &corpus("gear.traj"));
        let r = r.unwrap();
        assert_eq!(code, Some(0));
        assert!(r.max_residual < 1e-12, "{}", r.max_residual);
        let (code, r) = verify("pendulum.dae", keep, &corpus("pendulum.traj"));
        assert_eq!(code, Some(0));
        assert!(r.unwrap().max_residual <= 1e-6);
    }
}

#[test]
fn verify_rejects_an_inconsistent_trajectory() {
    let src = std::fs::read_to_string(corpus("pendulum.traj"))
        .unwrap()
        .replace("let y2 = L*cos(theta)", "let y2 = L*cos(theta) + 0.1");
    let shifted = scratch("shifted.traj", &src);
    let (code, r) = verify("pendulum.dae", "y2", &shifted);
    assert_eq!(code, Some(5));
    assert!(r.unwrap().max_residual > 1e-3);
}

#[test]
fn verify_reports_missing_assignments() {
    let partial = scratch("partial.traj", "let g = 9.8\nlet L = 1\nrange 0 1 5\n");
    let o = daelim(&[
        "verify",
        path(&corpus("pendulum.dae")),
        "--keep",
        "y1",
        "--trajectory",
        path(&partial),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no assignment for `y1`"));
}
