//! End-to-end differential-algebraic elimination: reduce the index, build the
//! Dixon matrix of the enlarged system with the kept variable treated as a
//! parameter, and extract a single ODE in the kept variable.

use std::collections::BTreeSet;
use std::thread;

use num_traits::One;
use thiserror::Error;

use crate::dixon::{
    extract_dixon_matrix, projection_operator, remove_row_col_gcd, CancellationMatrix, DixonMatrixResult, Projection,
};
use crate::dsl::DaeSystem;
use crate::error::AlgebraError;
use crate::gcd::{may_have_repeated_factor, multivariate_gcd};
use crate::poly::Polynomial;
use crate::rational::Rational;
use crate::reduction::{reduce_index, ReductionConfig, ReductionError, ReductionResult};
use crate::symbol::Symbol;

const SQUARE_FREE_TERM_LIMIT: usize = 20_000;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EliminationConfig {
    pub reduction: ReductionConfig,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationResult {
    pub kept: Option<Symbol>,
    /// Symbols of the kept variable occurring in the resultant, ascending.
    pub kept_family: Vec<Symbol>,
    /// Normalized to integer content 1 and a positive leading coefficient.
    pub resultant: Polynomial,
    /// Factors divided out along the way that are not part of the resultant.
    pub extraneous_factors: Vec<Polynomial>,
    pub matrix_rows: usize,
    pub matrix_cols: usize,
    /// Dixon matrix as extracted from the Dixon polynomial.
    pub raw_matrix: DixonMatrixResult,
    /// Dixon matrix after row/column gcd removal.
    pub matrix: DixonMatrixResult,
    pub projection: Projection,
    pub warnings: Vec<String>,
    pub reduction: ReductionResult,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EliminationError {
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error("resultant vanishes identically: {reason}")]
    ResultantVanishes {
        reason: String,
        reduction: Box<ReductionResult>,
    },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Eliminates every dependent variable except `keep`. With `keep = None`
/// all dependent-variable symbols are eliminated.
pub fn differential_algebraic_resultant(
    sys: &DaeSystem,
    keep: Option<Symbol>,
    config: &EliminationConfig,
) -> Result<EliminationResult, EliminationError> {
    let reduction = reduce_index(sys, keep, &config.reduction)?;
    let vanishes = |reason: &str, reduction: &ReductionResult| EliminationError::ResultantVanishes {
        reason: reason.to_string(),
        reduction: Box::new(reduction.clone()),
    };

    let eqs: Vec<Polynomial> = reduction.enlarged.iter().map(|e| e.poly.clone()).collect();
    let cancellation = CancellationMatrix::build(&eqs, &reduction.elimination)?;
    let theta = cancellation.dixon_polynomial()?;
    if theta.is_zero() {
        return Err(vanishes("the Dixon polynomial is zero", &reduction));
    }
    let raw_matrix = extract_dixon_matrix(&theta, &reduction.elimination);
    let matrix = remove_row_col_gcd(&raw_matrix)?;
    let projection = match projection_operator(&matrix.matrix) {
        Ok(p) => p,
        Err(AlgebraError::ZeroMatrix) => return Err(vanishes("the Dixon matrix is zero", &reduction)),
        Err(e) => return Err(e.into()),
    };
    if projection.value.is_zero() {
        return Err(vanishes("the projection operator is zero", &reduction));
    }

    let mut warnings = Vec::new();
    if projection.heuristic_unsound {
        warnings.push("heuristic_unsound: no column of the Dixon matrix is independent of the others".to_string());
    }
    if projection.rank < matrix.matrix.rows().max(matrix.matrix.cols()) {
        warnings.push(format!(
            "Dixon matrix is {}x{} with rank {}; using a rank submatrix",
            matrix.matrix.rows(),
            matrix.matrix.cols(),
            projection.rank
        ));
    }

    let mut extraneous = Vec::new();
    for (_, f) in matrix.removed_row_factors.iter().chain(&matrix.removed_col_factors) {
        push_factor(&mut extraneous, f);
    }

    let mut value = projection.value.clone();
    if value.num_terms() > 1 {
        let mono = value.monomial_content();
        if !mono.is_one() {
            let factor = Polynomial::term(mono, Rational::one());
            value = value.exact_div(&factor)?;
            push_factor(&mut extraneous, &factor);
        }
    }
    let family: BTreeSet<Symbol> = value
        .symbols()
        .into_iter()
        .filter(|s| keep.is_some_and(|k| s.dependent_index() == k.dependent_index()))
        .collect();
    if keep.is_some() && !family.is_empty() {
        let content = value
            .coefficient_decomposition(&family)
            .values()
            .fold(Polynomial::zero(), |g, c| multivariate_gcd(&g, c));
        if !content.is_constant() {
            value = value.exact_div(&content)?;
            push_factor(&mut extraneous, &content);
        }
    }
    if may_have_repeated_factor(&value) {
        if value.num_terms() > SQUARE_FREE_TERM_LIMIT {
            warnings.push(format!(
                "repeated-factor reduction skipped: the projection operator has {} terms",
                value.num_terms()
            ));
        } else {
            let repeated = repeated_part(&value);
            if !repeated.is_constant() {
                value = value.exact_div(&repeated)?;
                warnings
                    .push("repeated factors of the projection operator were reduced to multiplicity one".to_string());
            }
        }
    }
    let resultant = value.normalized();
    let kept_family = resultant
        .symbols()
        .into_iter()
        .filter(|s| keep.is_some_and(|k| s.dependent_index() == k.dependent_index()))
        .collect();

    Ok(EliminationResult {
        kept: keep,
        kept_family,
        resultant,
        extraneous_factors: extraneous,
        matrix_rows: matrix.matrix.rows(),
        matrix_cols: matrix.matrix.cols(),
        raw_matrix,
        matrix,
        projection,
        warnings,
        reduction,
    })
}

fn push_factor(list: &mut Vec<Polynomial>, f: &Polynomial) {
    if f.is_constant() {
        return;
    }
    let f = f.normalized();
    if !list.contains(&f) {
        list.push(f);
    }
}

/// `gcd(p, ∂p/∂x for every symbol x)`: the product of the repeated factors
/// of `p`, each with multiplicity lowered by one.
fn repeated_part(p: &Polynomial) -> Polynomial {
    let mut g = p.clone();
    for s in p.symbols() {
        if g.is_constant() {
            break;
        }
        g = multivariate_gcd(&g, &p.partial_derivative(&s));
    }
    g
}

/// Runs [`differential_algebraic_resultant`] for each target on its own
/// thread. Results come back in target order; a failing target does not
/// affect the others.
pub fn eliminate_each(
    sys: &DaeSystem,
    targets: &[Symbol],
    config: &EliminationConfig,
) -> Vec<(Symbol, Result<EliminationResult, EliminationError>)> {
    thread::scope(|scope| {
        let handles: Vec<_> = targets
            .iter()
            .map(|&t| scope.spawn(move || (t, differential_algebraic_resultant(sys, Some(t), config))))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("elimination thread panicked"))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_system;

    fn resultant_of(src: &str, keep: &str) -> (DaeSystem, EliminationResult) {
        let sys = parse_system(src).unwrap();
        let k = sys.lookup_dependent(keep).unwrap();
        let r = differential_algebraic_resultant(&sys, Some(k), &EliminationConfig::default()).unwrap();
        (sys, r)
    }

    fn expect(sys: &DaeSystem, got: &Polynomial, expected: &str) {
        let src = format!("{}\neq {expected} = 0", crate::dsl::render_system(sys));
        let want = parse_system(&src).unwrap().equations.pop().unwrap().poly;
        assert!(
            got.rational_multiple_of(&want).is_some(),
            "got {}, want {expected}",
            sys.render(got)
        );
    }

    const GEAR: &str = "system gear\nparam eta\nfunc p1, p2\nvar y1, y2\n\
        eq y1' + (1+eta)*y2 + eta*t*y2' = p1\neq y1 + eta*t*y2 = p2\n";

    #[test]
    fn gear_resultants() {
        let (sys, r) = resultant_of(GEAR, "y1");
        expect(&sys, &r.resultant, "y1 - p2 + eta*t*(p1 - p2')");
        assert_eq!((r.matrix_rows, r.matrix_cols), (1, 1));
        let (sys, r) = resultant_of(GEAR, "y2");
        expect(&sys, &r.resultant, "y2 - p1 + p2'");
    }

    #[test]
    fn non_square_resultants() {
        let src = "system lgy\nfunc c10, c13, c20, c22, c30, c31\nvar y1, y2\n\
             eq c10 + c13*y1'*y2' = 0\neq c20 + c22*y1'*y2 = 0\neq c30 + c31*y1*y2 = 0";
        let (sys, r) = resultant_of(src, "y1");
        expect(&sys, &r.resultant, "c20*c31*y1 - c22*c30*y1'");
        let (sys, r) = resultant_of(src, "y2");
        expect(&sys, &r.resultant, "-c10*c22*y2 + c20*c13*y2'");
    }

    #[test]
    fn each_matches_single_calls() {
        let sys = parse_system(GEAR).unwrap();
        let targets = sys.dependents();
        let all = eliminate_each(&sys, &targets, &EliminationConfig::default());
        for (t, r) in all {
            let single = differential_algebraic_resultant(&sys, Some(t), &EliminationConfig::default());
            assert_eq!(r, single);
        }
    }
}
