//! Command implementations behind the `daelim` binary.

pub mod error;
pub mod expr;
pub mod report;
pub mod trajectory;
pub mod verify;

use std::path::Path;

use daelim_core::dsl::{parse_system, DaeSystem};
use daelim_core::elim::{differential_algebraic_resultant, eliminate_each, EliminationConfig};
use daelim_core::reduction::{reduce_index, ReductionConfig};
use daelim_core::Symbol;
use serde::Serialize;

pub use error::CliError;
use report::{elimination_report, reduce_report, EliminateAllReport, FailureReport, TargetReport, VerifyReport};
use trajectory::TrajectorySpec;

pub const MAX_DIFF_VAR: &str = "DAELIM_MAX_DIFF";
pub const TOLERANCE_EXIT: i32 = 5;

/// Text for stdout and the process exit status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_system(path: &Path) -> Result<DaeSystem, CliError> {
    parse_system(&read(path)?).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

/// Configuration with the differentiation budget taken from `value`, the
/// contents of `DAELIM_MAX_DIFF` if set.
pub fn config_from(value: Option<&str>) -> Result<EliminationConfig, CliError> {
    let max_differentiations = value
        .map(|v| {
            v.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("{MAX_DIFF_VAR} must be a nonnegative integer, got `{v}`")))
        })
        .transpose()?;
    Ok(EliminationConfig {
        reduction: ReductionConfig { max_differentiations },
    })
}

pub fn config_from_env() -> Result<EliminationConfig, CliError> {
    config_from(std::env::var(MAX_DIFF_VAR).ok().as_deref())
}

fn dependent(sys: &DaeSystem, name: &str) -> Result<Symbol, CliError> {
    sys.lookup_dependent(name)
        .ok_or_else(|| CliError::Usage(format!("`{name}` is not a declared dependent variable")))
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

pub fn run_reduce(
    path: &Path,
    target: Option<&str>,
    as_json: bool,
    config: &EliminationConfig,
) -> Result<Output, CliError> {
    let sys = load_system(path)?;
    let target = target.map(|t| dependent(&sys, t)).transpose()?;
    let r = reduce_index(&sys, target, &config.reduction)?;
    let report = reduce_report(&sys, &r);
    Ok(Output::ok(if as_json { json(&report) } else { report.to_text() }))
}

pub fn run_eliminate(
    path: &Path,
    keep: &str,
    as_json: bool,
    show_matrix: bool,
    config: &EliminationConfig,
) -> Result<Output, CliError> {
    let sys = load_system(path)?;
    let keep = dependent(&sys, keep)?;
    let r = differential_algebraic_resultant(&sys, Some(keep), config)?;
    let report = elimination_report(&sys, &r, show_matrix);
    Ok(Output::ok(if as_json { json(&report) } else { report.to_text() }))
}

/// Eliminates for every dependent variable. Failing targets are reported
/// in place; the exit status is nonzero only when every target fails.
pub fn run_eliminate_all(path: &Path, as_json: bool, config: &EliminationConfig) -> Result<Output, CliError> {
    let sys = load_system(path)?;
    let targets = sys.dependents();
    let mut first_failure = None;
    let results: Vec<TargetReport> = eliminate_each(&sys, &targets, config)
        .into_iter()
        .map(|(t, r)| match r {
            Ok(r) => TargetReport::Ok(elimination_report(&sys, &r, false)),
            Err(e) => {
                let e = CliError::from(e);
                first_failure.get_or_insert(e.exit_code());
                TargetReport::Failed(FailureReport {
                    system: sys.name.clone(),
                    kept: sys.display_symbol(&t),
                    error: e.to_string(),
                    exit_code: e.exit_code(),
                })
            }
        })
        .collect();
    let all_failed = results.iter().all(|r| matches!(r, TargetReport::Failed(_)));
    let report = EliminateAllReport {
        system: sys.name.clone(),
        results,
    };
    Ok(Output {
        text: if as_json { json(&report) } else { report.to_text() },
        code: if all_failed { first_failure.unwrap_or(0) } else { 0 },
    })
}

pub struct VerifyOptions<'a> {
    pub keep: &'a str,
    pub trajectory: &'a Path,
    pub tolerance: f64,
    pub samples: Option<usize>,
    pub json: bool,
}

pub fn run_verify(path: &Path, opts: &VerifyOptions, config: &EliminationConfig) -> Result<Output, CliError> {
    let sys = load_system(path)?;
    let keep = dependent(&sys, opts.keep)?;
    let traj_err = |source| CliError::Trajectory {
        path: opts.trajectory.display().to_string(),
        source,
    };
    let mut spec = TrajectorySpec::parse(&read(opts.trajectory)?).map_err(traj_err)?;
    if let Some(n) = opts.samples {
        if n < 2 {
            return Err(CliError::Usage("--samples must be at least 2".to_string()));
        }
        spec.samples = n;
    }
    let r = differential_algebraic_resultant(&sys, Some(keep), config)?;
    let residuals = verify::residuals(&sys, &r.resultant, &spec).map_err(traj_err)?;
    let (max_residual, worst_t) = residuals.max();
    let pass = max_residual <= opts.tolerance;
    let report = VerifyReport {
        system: sys.name.clone(),
        kept: opts.keep.to_string(),
        resultant: sys.render(&r.resultant),
        samples: spec.samples,
        max_residual,
        worst_t,
        tolerance: opts.tolerance,
        pass,
    };
    Ok(Output {
        text: if opts.json { json(&report) } else { report.to_text() },
        code: if pass { 0 } else { TOLERANCE_EXIT },
    })
}
