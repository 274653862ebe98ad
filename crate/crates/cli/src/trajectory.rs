//! Trajectory files for numeric verification.
//!
//! ```text
//! # closed form or ODE-driven values for the symbols of a system
//! let L = 1
//! let y1 = L*sin(theta)
//! ode theta' = omega
//! ode omega' = -9.8/L*sin(theta)
//! init theta = 0.5
//! init omega = 0
//! step 1e-4
//! range 0 2 200
//! ```
//!
//! `let` binds a name to an expression in `t` and the ODE states. The name
//! is either a helper, or a system symbol written as `y`, `y'`, `y''` or
//! `D(y,k)`. `ode`, `init` and `step` declare states integrated with RK4.

use std::collections::HashMap;

use daelim_core::dsl::DaeSystem;
use daelim_core::Symbol;
use thiserror::Error;

use crate::expr::{parse_expr, Expr, ExprError};

const DEFAULT_STEP: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum TrajectoryError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Expr { line: usize, source: ExprError },
    #[error("no `range` line")]
    MissingRange,
    #[error("state `{0}` has no `init` value")]
    MissingInit(String),
    #[error("no assignment for `{0}`")]
    MissingAssignment(String),
    #[error("`{0}` is a parameter and cannot be differentiated")]
    ParameterDerivative(String),
}

/// A `let` target: base name and derivative order.
#[derive(Clone, Debug, PartialEq)]
pub struct Binding {
    pub name: String,
    pub order: u32,
    pub expr: Expr,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectorySpec {
    pub bindings: Vec<Binding>,
    pub states: Vec<String>,
    pub rates: Vec<Expr>,
    pub initial: Vec<f64>,
    pub step: f64,
    pub start: f64,
    pub end: f64,
    pub samples: usize,
}

fn syntax(line: usize, message: impl Into<String>) -> TrajectoryError {
    TrajectoryError::Syntax {
        line,
        message: message.into(),
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_alphabetic() || c == '_') && chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// `y`, `y'`, `y''`, `D(y)` or `D(y,k)`.
fn parse_target(text: &str) -> Option<(String, u32)> {
    let text = text.trim();
    if let Some(inner) = text.strip_prefix("D(").and_then(|r| r.strip_suffix(')')) {
        let (name, order) = match inner.split_once(',') {
            Some((n, k)) => (n.trim(), k.trim().parse().ok()?),
            None => (inner.trim(), 1),
        };
        return is_ident(name).then(|| (name.to_string(), order));
    }
    let name = text.trim_end_matches('\'');
    let order = (text.len() - name.len()) as u32;
    is_ident(name).then(|| (name.to_string(), order))
}

impl TrajectorySpec {
    pub fn parse(src: &str) -> Result<Self, TrajectoryError> {
        let lines: Vec<(usize, &str)> = src
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();

        let mut states = Vec::new();
        for &(n, line) in &lines {
            if let Some(rest) = line.strip_prefix("ode ") {
                let (lhs, _) = rest.split_once('=').ok_or_else(|| syntax(n, "expected `=`"))?;
                match parse_target(lhs) {
                    Some((name, 1)) if !states.contains(&name) => states.push(name),
                    Some((name, 1)) => return Err(syntax(n, format!("state `{name}` declared twice"))),
                    _ => return Err(syntax(n, "expected `ode <name>' = <expr>`")),
                }
            }
        }

        let mut helpers: HashMap<String, Expr> = HashMap::new();
        let mut bindings = Vec::new();
        let mut rates = vec![None; states.len()];
        let mut initial = vec![None; states.len()];
        let mut step = DEFAULT_STEP;
        let mut range = None;
        for &(n, line) in &lines {
            let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let parse = |text: &str, helpers: &HashMap<String, Expr>| {
                parse_expr(text, |name| {
                    states
                        .iter()
                        .position(|s| s == name)
                        .map(Expr::State)
                        .or_else(|| helpers.get(name).cloned())
                })
                .map_err(|source| TrajectoryError::Expr { line: n, source })
            };
            match keyword {
                "let" => {
                    let (lhs, rhs) = rest.split_once('=').ok_or_else(|| syntax(n, "expected `=`"))?;
                    let (name, order) = parse_target(lhs).ok_or_else(|| syntax(n, "invalid `let` target"))?;
                    if states.contains(&name) {
                        return Err(syntax(n, format!("`{name}` is an ODE state")));
                    }
                    let expr = parse(rhs, &helpers)?;
                    if order == 0 {
                        helpers.insert(name.clone(), expr.clone());
                    }
                    bindings.push(Binding { name, order, expr });
                }
                "ode" => {
                    let (lhs, rhs) = rest.split_once('=').expect("checked above");
                    let (name, _) = parse_target(lhs).expect("checked above");
                    let i = states.iter().position(|s| *s == name).expect("collected above");
                    rates[i] = Some(parse(rhs, &helpers)?);
                }
                "init" => {
                    let (lhs, rhs) = rest.split_once('=').ok_or_else(|| syntax(n, "expected `=`"))?;
                    let name = lhs.trim();
                    let i = states
                        .iter()
                        .position(|s| s == name)
                        .ok_or_else(|| syntax(n, format!("`{name}` is not an ODE state")))?;
                    let value = parse(rhs, &helpers)?
                        .constant()
                        .ok_or_else(|| syntax(n, "initial value must be constant"))?;
                    initial[i] = Some(value);
                }
                "step" => {
                    step = rest
                        .trim()
                        .parse::<f64>()
                        .ok()
                        .filter(|h| *h > 0.0 && h.is_finite())
                        .ok_or_else(|| syntax(n, "step must be a positive number"))?;
                }
                "range" => {
                    let parts: Vec<&str> = rest.split_whitespace().collect();
                    let [a, b, count] = parts[..] else {
                        return Err(syntax(n, "expected `range <start> <end> <samples>`"));
                    };
                    let a: f64 = a.parse().map_err(|_| syntax(n, "invalid range start"))?;
                    let b: f64 = b.parse().map_err(|_| syntax(n, "invalid range end"))?;
                    let count: usize = count.parse().map_err(|_| syntax(n, "invalid sample count"))?;
                    if b.partial_cmp(&a) != Some(std::cmp::Ordering::Greater) || count < 2 {
                        return Err(syntax(n, "range needs end > start and at least 2 samples"));
                    }
                    range = Some((a, b, count));
                }
                other => return Err(syntax(n, format!("unknown directive `{other}`"))),
            }
        }
        let (start, end, samples) = range.ok_or(TrajectoryError::MissingRange)?;
        let initial = initial
            .into_iter()
            .zip(&states)
            .map(|(v, s)| v.ok_or_else(|| TrajectoryError::MissingInit(s.clone())))
            .collect::<Result<_, _>>()?;
        Ok(TrajectorySpec {
            bindings,
            states,
            rates: rates
                .into_iter()
                .map(|r| r.expect("every state has an ode line"))
                .collect(),
            initial,
            step,
            start,
            end,
            samples,
        })
    }

    /// Expression for a symbol of `sys`. A derivative without its own binding
    /// is obtained by differentiating the highest bound lower derivative.
    pub fn expression(&self, sys: &DaeSystem, sym: &Symbol) -> Result<Expr, TrajectoryError> {
        if *sym == Symbol::Time {
            return Ok(Expr::Time);
        }
        let name = sys.table.base_name(sym);
        let order = sym.order();
        let best = self
            .bindings
            .iter()
            .filter(|b| b.name == name && b.order <= order)
            .max_by_key(|b| b.order)
            .ok_or_else(|| TrajectoryError::MissingAssignment(sys.display_symbol(sym)))?;
        if matches!(sym, Symbol::Parameter(_)) && best.order > 0 {
            return Err(TrajectoryError::ParameterDerivative(name.to_string()));
        }
        Ok((best.order..order).fold(best.expr.clone(), |e, _| e.derivative(&self.rates)))
    }

    pub fn sample_times(&self) -> Vec<f64> {
        let n = self.samples;
        (0..n)
            .map(|i| self.start + (self.end - self.start) * i as f64 / (n - 1) as f64)
            .collect()
    }

    /// State values at every sample time, integrated with classical RK4.
    /// Between consecutive samples the gap is split into equal steps no
    /// longer than `step`.
    pub fn integrate(&self, times: &[f64]) -> Vec<Vec<f64>> {
        let mut state = self.initial.clone();
        let mut t = self.start;
        let mut out = Vec::with_capacity(times.len());
        for &target in times {
            let gap = target - t;
            if gap > 0.0 {
                let steps = ((gap / self.step) - 1e-9).ceil().max(1.0) as usize;
                let h = gap / steps as f64;
                for k in 0..steps {
                    state = rk4_step(&self.rates, t + k as f64 * h, &state, h);
                }
                t = target;
            }
            out.push(state.clone());
        }
        out
    }
}

fn rk4_step(rates: &[Expr], t: f64, y: &[f64], h: f64) -> Vec<f64> {
    let f = |t: f64, y: &[f64]| -> Vec<f64> { rates.iter().map(|r| r.eval(t, y)).collect() };
    let shifted = |k: &[f64], c: f64| -> Vec<f64> { y.iter().zip(k).map(|(y, k)| y + c * k).collect() };
    let k1 = f(t, y);
    let k2 = f(t + h / 2.0, &shifted(&k1, h / 2.0));
    let k3 = f(t + h / 2.0, &shifted(&k2, h / 2.0));
    let k4 = f(t + h, &shifted(&k3, h));
    (0..y.len())
        .map(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}
