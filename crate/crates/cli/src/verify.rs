//! Numeric evaluation of a resultant along a trajectory.

use daelim_core::dsl::DaeSystem;
use daelim_core::rational::to_f64;
use daelim_core::Polynomial;

use crate::expr::Expr;
use crate::trajectory::{TrajectoryError, TrajectorySpec};

#[derive(Clone, Debug, PartialEq)]
pub struct Residuals {
    pub times: Vec<f64>,
    /// `|sum of terms| / (1 + max |term|)` at each sample.
    pub relative: Vec<f64>,
}

impl Residuals {
    /// Largest residual and the time where it occurs.
    pub fn max(&self) -> (f64, f64) {
        self.relative
            .iter()
            .zip(&self.times)
            .fold((0.0, self.times[0]), |(best, at), (&r, &t)| {
                if r > best || r.is_nan() {
                    (r, t)
                } else {
                    (best, at)
                }
            })
    }
}

/// Relative residual of `terms`, summed in decreasing magnitude.
pub fn relative_residual(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
    let largest = terms.first().map_or(0.0, |v| v.abs());
    let sum: f64 = terms.iter().sum();
    sum.abs() / (1.0 + largest)
}

pub fn residuals(sys: &DaeSystem, poly: &Polynomial, spec: &TrajectorySpec) -> Result<Residuals, TrajectoryError> {
    let symbols: Vec<_> = poly.symbols().into_iter().collect();
    let exprs: Vec<Expr> = symbols
        .iter()
        .map(|s| spec.expression(sys, s))
        .collect::<Result<_, _>>()?;
    let terms: Vec<(f64, Vec<(usize, i32)>)> = poly
        .terms()
        .map(|(m, c)| {
            let factors = m
                .factors()
                .iter()
                .map(|(s, e)| (symbols.iter().position(|x| x == s).expect("collected"), *e as i32))
                .collect();
            (to_f64(c), factors)
        })
        .collect();
    let times = spec.sample_times();
    let states = spec.integrate(&times);
    let relative = times
        .iter()
        .zip(&states)
        .map(|(&t, y)| {
            let values: Vec<f64> = exprs.iter().map(|e| e.eval(t, y)).collect();
            let evaluated = terms
                .iter()
                .map(|(c, factors)| factors.iter().fold(*c, |acc, &(i, e)| acc * values[i].powi(e)))
                .collect();
            relative_residual(evaluated)
        })
        .collect();
    Ok(Residuals { times, relative })
}
