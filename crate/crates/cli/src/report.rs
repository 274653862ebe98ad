//! Serializable reports and their plain-text rendering.

use std::fmt::Write;

use daelim_core::dixon::DixonMatrixResult;
use daelim_core::dsl::{render_monomial, DaeSystem};
use daelim_core::elim::EliminationResult;
use daelim_core::reduction::{ReductionResult, Termination, VariablePencil};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilReport {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub bits: Vec<Vec<u8>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationReport {
    pub label: String,
    pub equation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReduceReport {
    pub system: String,
    pub target: Option<String>,
    pub upsilon: Vec<u32>,
    pub weak_index: u32,
    pub termination: String,
    pub kept_family: Vec<String>,
    pub known: Vec<String>,
    pub elimination: Vec<String>,
    pub initial_pencil: PencilReport,
    pub pencil: PencilReport,
    pub enlarged: Vec<EquationReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixReport {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub entries: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationReport {
    pub system: String,
    pub kept: String,
    pub upsilon: Vec<u32>,
    pub weak_index: u32,
    pub matrix_rows: usize,
    pub matrix_cols: usize,
    pub resultant: String,
    pub extraneous_factors: Vec<String>,
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureReport {
    pub system: String,
    pub kept: String,
    pub error: String,
    pub exit_code: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TargetReport {
    Ok(EliminationReport),
    Failed(FailureReport),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminateAllReport {
    pub system: String,
    pub results: Vec<TargetReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub system: String,
    pub kept: String,
    pub resultant: String,
    pub samples: usize,
    pub max_residual: f64,
    pub worst_t: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn pencil_report(sys: &DaeSystem, p: &VariablePencil) -> PencilReport {
    PencilReport {
        rows: p.row_labels.clone(),
        cols: p.col_labels.iter().map(|s| sys.display_symbol(s)).collect(),
        bits: p
            .bits
            .iter()
            .map(|r| r.iter().map(|b| u8::from(*b)).collect())
            .collect(),
    }
}

fn termination_name(t: Option<Termination>) -> &'static str {
    match t {
        Some(Termination::Initial) => "initial",
        Some(Termination::Algebraic) => "algebraic",
        Some(Termination::Differential) => "differential",
        None => "none",
    }
}

pub fn reduce_report(sys: &DaeSystem, r: &ReductionResult) -> ReduceReport {
    let names = |v: &[daelim_core::Symbol]| v.iter().map(|s| sys.display_symbol(s)).collect();
    ReduceReport {
        system: sys.name.clone(),
        target: r.target.map(|s| sys.display_symbol(&s)),
        upsilon: r.upsilon.clone(),
        weak_index: r.weak_index,
        termination: termination_name(r.termination).to_string(),
        kept_family: names(&r.kept_family),
        known: names(&r.known),
        elimination: names(&r.elimination),
        initial_pencil: pencil_report(sys, &r.initial_pencil),
        pencil: pencil_report(sys, &r.pencil),
        enlarged: r
            .enlarged
            .iter()
            .map(|e| EquationReport {
                label: e.label(),
                equation: format!("{} = 0", sys.render(&e.poly)),
            })
            .collect(),
    }
}

pub fn matrix_report(sys: &DaeSystem, d: &DixonMatrixResult) -> MatrixReport {
    MatrixReport {
        rows: d.row_monomials.iter().map(|m| render_monomial(m, &sys.table)).collect(),
        cols: d.col_monomials.iter().map(|m| render_monomial(m, &sys.table)).collect(),
        entries: (0..d.matrix.rows())
            .map(|i| d.matrix.row(i).iter().map(|e| sys.render(e)).collect())
            .collect(),
    }
}

pub fn elimination_report(sys: &DaeSystem, r: &EliminationResult, show_matrix: bool) -> EliminationReport {
    EliminationReport {
        system: sys.name.clone(),
        kept: r.kept.map_or_else(String::new, |s| sys.display_symbol(&s)),
        upsilon: r.reduction.upsilon.clone(),
        weak_index: r.reduction.weak_index,
        matrix_rows: r.matrix_rows,
        matrix_cols: r.matrix_cols,
        resultant: sys.render(&r.resultant),
        extraneous_factors: r.extraneous_factors.iter().map(|f| sys.render(f)).collect(),
        warnings: r.warnings.clone(),
        matrix: show_matrix.then(|| matrix_report(sys, &r.matrix)),
    }
}

fn join(v: &[String]) -> String {
    if v.is_empty() {
        "(none)".to_string()
    } else {
        v.join(", ")
    }
}

fn render_pencil(p: &PencilReport) -> String {
    let label_width = p.rows.iter().map(String::len).max().unwrap_or(0);
    let widths: Vec<usize> = p.cols.iter().map(String::len).collect();
    let mut out = format!("  {:label_width$}", "");
    for (c, w) in p.cols.iter().zip(&widths) {
        let _ = write!(out, "  {c:>w$}");
    }
    out.push('\n');
    for (label, row) in p.rows.iter().zip(&p.bits) {
        let _ = write!(out, "  {label:label_width$}");
        for (b, w) in row.iter().zip(&widths) {
            let _ = write!(out, "  {b:>w$}");
        }
        out.push('\n');
    }
    out
}

fn vector(v: &[u32]) -> String {
    let parts: Vec<String> = v.iter().map(u32::to_string).collect();
    format!("({})", parts.join(", "))
}

impl ReduceReport {
    pub fn to_text(&self) -> String {
        let mut out = format!("system {}\n", self.system);
        let _ = writeln!(out, "target: {}", self.target.as_deref().unwrap_or("(none)"));
        let _ = writeln!(out, "initial pencil:\n{}", render_pencil(&self.initial_pencil));
        let _ = writeln!(out, "final pencil:\n{}", render_pencil(&self.pencil));
        let _ = writeln!(out, "upsilon: {}", vector(&self.upsilon));
        let _ = writeln!(out, "weak index: {}", self.weak_index);
        let _ = writeln!(out, "termination: {}", self.termination);
        let _ = writeln!(out, "kept family: {}", join(&self.kept_family));
        let _ = writeln!(out, "known: {}", join(&self.known));
        let _ = writeln!(out, "eliminate: {}", join(&self.elimination));
        out.push_str("enlarged system:\n");
        for e in &self.enlarged {
            let _ = writeln!(out, "  {}: {}", e.label, e.equation);
        }
        out
    }
}

impl MatrixReport {
    pub fn to_text(&self) -> String {
        let mut cells: Vec<Vec<String>> = vec![std::iter::once(String::new())
            .chain(self.cols.iter().cloned())
            .collect()];
        for (label, row) in self.rows.iter().zip(&self.entries) {
            cells.push(std::iter::once(label.clone()).chain(row.iter().cloned()).collect());
        }
        let widths: Vec<usize> = (0..cells[0].len())
            .map(|j| cells.iter().map(|r| r[j].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in &cells {
            let line: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
            let _ = writeln!(out, "  {}", line.join(" | ").trim_end());
        }
        out
    }
}

impl EliminationReport {
    pub fn to_text(&self) -> String {
        let mut out = format!("system {}\n", self.system);
        let _ = writeln!(out, "kept: {}", self.kept);
        let _ = writeln!(out, "upsilon: {}", vector(&self.upsilon));
        let _ = writeln!(out, "weak index: {}", self.weak_index);
        let _ = writeln!(out, "matrix: {}x{}", self.matrix_rows, self.matrix_cols);
        if let Some(m) = &self.matrix {
            out.push_str(&m.to_text());
        }
        let _ = writeln!(out, "removed factors: {}", join(&self.extraneous_factors));
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        let _ = writeln!(out, "resultant: {} = 0", self.resultant);
        out
    }
}

impl EliminateAllReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, r) in self.results.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            match r {
                TargetReport::Ok(e) => out.push_str(&e.to_text()),
                TargetReport::Failed(f) => {
                    let _ = writeln!(out, "system {}\nkept: {}\nerror: {}", f.system, f.kept, f.error);
                }
            }
        }
        out
    }
}

impl VerifyReport {
    pub fn to_text(&self) -> String {
        format!(
            "system {}\nkept: {}\nresultant: {} = 0\nsamples: {}\nmax relative residual: {:e} at t = {}\ntolerance: {:e}\n{}\n",
            self.system,
            self.kept,
            self.resultant,
            self.samples,
            self.max_residual,
            self.worst_t,
            self.tolerance,
            if self.pass { "pass" } else { "FAIL" }
        )
    }
}
