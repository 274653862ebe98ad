//! Generalized Dixon elimination: cancellation matrix, Dixon polynomial,
//! Dixon matrix, row/column content removal and the projection operator.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::AlgebraError;
use crate::gcd::multivariate_gcd;
use crate::matrix::PolyMatrix;
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::rational::Rational;
use crate::symbol::Symbol;

/// `(N+1) x (N+1)` matrix whose row `k` is the equation list with the first
/// `k` elimination symbols replaced by their barred twins.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CancellationMatrix {
    pub matrix: PolyMatrix,
    pub elim_symbols: Vec<Symbol>,
}

impl CancellationMatrix {
    pub fn build(eqs: &[Polynomial], elim: &[Symbol]) -> Result<Self, AlgebraError> {
        if eqs.len() != elim.len() + 1 {
            return Err(AlgebraError::CountMismatch {
                equations: eqs.len(),
                symbols: elim.len(),
            });
        }
        if eqs.iter().any(|e| e.mentions(Symbol::is_barred)) {
            return Err(AlgebraError::BarredOperand);
        }
        let mut rows = Vec::with_capacity(eqs.len());
        let mut mapping = HashMap::new();
        rows.push(eqs.to_vec());
        for sym in elim {
            let bar = sym.barred().ok_or(AlgebraError::BarredOperand)?;
            mapping.insert(*sym, bar);
            rows.push(eqs.iter().map(|e| e.substitute(&mapping)).collect());
        }
        Ok(CancellationMatrix {
            matrix: PolyMatrix::from_rows(rows),
            elim_symbols: elim.to_vec(),
        })
    }

    /// `det(C) / prod(x_k - bar(x_k))`, computed by replacing every row
    /// (bottom-up) with its divided difference against the row above and
    /// taking one determinant.
    pub fn dixon_polynomial(&self) -> Result<Polynomial, AlgebraError> {
        let mut m = self.matrix.clone();
        let cols = m.cols();
        for k in (1..m.rows()).rev() {
            let x = self.elim_symbols[k - 1];
            let divisor = &Polynomial::var(x) - &Polynomial::var(x.barred().ok_or(AlgebraError::BarredOperand)?);
            for j in 0..cols {
                let diff = &m[(k, j)] - &m[(k - 1, j)];
                m[(k, j)] = diff.exact_div(&divisor)?;
            }
        }
        m.determinant()
    }
}

/// Dixon matrix with its monomial labels: the Dixon polynomial equals
/// `sum row_monomials[r] * matrix[r][c] * col_monomials[c]`, times the
/// removed factors once those are stripped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DixonMatrixResult {
    /// Monomials in the unbarred elimination symbols, ascending.
    pub row_monomials: Vec<Monomial>,
    /// Monomials in the barred elimination symbols, ascending.
    pub col_monomials: Vec<Monomial>,
    pub matrix: PolyMatrix,
    /// `(row index, factor)` pairs divided out of single rows.
    pub removed_row_factors: Vec<(usize, Polynomial)>,
    pub removed_col_factors: Vec<(usize, Polynomial)>,
}

impl DixonMatrixResult {
    /// `V_X · D · V_X̄` with the removed factors multiplied back in.
    pub fn reconstruct(&self) -> Polynomial {
        let mut row_scale = vec![Polynomial::one(); self.matrix.rows()];
        let mut col_scale = vec![Polynomial::one(); self.matrix.cols()];
        for (i, f) in &self.removed_row_factors {
            row_scale[*i] = &row_scale[*i] * f;
        }
        for (j, f) in &self.removed_col_factors {
            col_scale[*j] = &col_scale[*j] * f;
        }
        let mut acc = Polynomial::zero();
        for (i, rm) in self.row_monomials.iter().enumerate() {
            for (j, cm) in self.col_monomials.iter().enumerate() {
                let e = &self.matrix[(i, j)];
                if e.is_zero() {
                    continue;
                }
                let scaled = &(e * &row_scale[i]) * &col_scale[j];
                acc = &acc + &scaled.mul_term(&rm.mul(cm), &One::one());
            }
        }
        acc
    }
}

/// Collects the coefficient of every (unbarred monomial, barred monomial)
/// pair of `theta` over `elim`.
pub fn extract_dixon_matrix(theta: &Polynomial, elim: &[Symbol]) -> DixonMatrixResult {
    let unbarred: BTreeSet<Symbol> = elim.iter().copied().collect();
    let barred: BTreeSet<Symbol> = elim.iter().filter_map(Symbol::barred).collect();
    let split: BTreeSet<Symbol> = unbarred.union(&barred).copied().collect();
    let parts = theta.coefficient_decomposition(&split);

    let mut cells: BTreeMap<(Monomial, Monomial), Polynomial> = BTreeMap::new();
    let mut rows = BTreeSet::new();
    let mut cols = BTreeSet::new();
    for (mono, coeff) in parts {
        let (bar, plain) = mono.split(Symbol::is_barred);
        rows.insert(plain.clone());
        cols.insert(bar.clone());
        cells.insert((plain, bar), coeff);
    }
    if rows.is_empty() {
        rows.insert(Monomial::one());
        cols.insert(Monomial::one());
    }
    let row_monomials: Vec<Monomial> = rows.into_iter().collect();
    let col_monomials: Vec<Monomial> = cols.into_iter().collect();
    let mut matrix = PolyMatrix::zeros(row_monomials.len(), col_monomials.len());
    for (i, r) in row_monomials.iter().enumerate() {
        for (j, c) in col_monomials.iter().enumerate() {
            if let Some(v) = cells.remove(&(r.clone(), c.clone())) {
                matrix[(i, j)] = v;
            }
        }
    }
    DixonMatrixResult {
        row_monomials,
        col_monomials,
        matrix,
        removed_row_factors: Vec::new(),
        removed_col_factors: Vec::new(),
    }
}

fn is_trivial(g: &Polynomial) -> bool {
    g.is_zero() || g.is_one()
}

fn gcd_of<'a>(entries: impl Iterator<Item = &'a Polynomial>) -> Polynomial {
    let mut g = Polynomial::zero();
    for e in entries {
        if e.is_zero() {
            continue;
        }
        g = multivariate_gcd(&g, e);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Divides every row, then every column, by the gcd of its entries, until
/// no row or column has a nontrivial common factor.
///
/// A 1x1 matrix is returned unchanged: its single entry is the determinant,
/// and there is no cofactor for a common factor to come from.
pub fn remove_row_col_gcd(d: &DixonMatrixResult) -> Result<DixonMatrixResult, AlgebraError> {
    let mut out = d.clone();
    if out.matrix.rows() == 1 && out.matrix.cols() == 1 {
        return Ok(out);
    }
    loop {
        let mut changed = false;
        for i in 0..out.matrix.rows() {
            let g = gcd_of(out.matrix.row(i).iter());
            if is_trivial(&g) {
                continue;
            }
            for j in 0..out.matrix.cols() {
                out.matrix[(i, j)] = out.matrix[(i, j)].exact_div(&g)?;
            }
            out.removed_row_factors.push((i, g));
            changed = true;
        }
        for j in 0..out.matrix.cols() {
            let g = gcd_of(out.matrix.column(j));
            if is_trivial(&g) {
                continue;
            }
            for i in 0..out.matrix.rows() {
                out.matrix[(i, j)] = out.matrix[(i, j)].exact_div(&g)?;
            }
            out.removed_col_factors.push((j, g));
            changed = true;
        }
        if !changed {
            return Ok(out);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    pub value: Polynomial,
    pub rank: usize,
    /// Rows and columns of the submatrix whose determinant is `value`.
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    /// Set when no column is linearly independent of all the others, so the
    /// rank-submatrix determinant is not guaranteed to be a projection
    /// operator.
    pub heuristic_unsound: bool,
}

const GENERIC_POINTS: u64 = 3;

/// Pseudo-random point with coordinates in `1..2^31`, fixed by `seed`.
fn generic_point(symbols: &BTreeSet<Symbol>, seed: u64) -> HashMap<Symbol, Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    symbols
        .iter()
        .map(|&s| (s, Rational::from_integer(rng.gen_range(1i64..1 << 31).into())))
        .collect()
}

/// Determinant of the matrix when it is square and non-singular, otherwise
/// the determinant of a maximal non-singular submatrix.
///
/// Ranks and pivots are found over the rationals at a few fixed
/// pseudo-random points; the largest rank seen is taken as the generic rank.
/// The chosen submatrix is non-singular at that point, so its symbolic
/// determinant is never zero.
pub fn projection_operator(m: &PolyMatrix) -> Result<Projection, AlgebraError> {
    if m.is_zero() {
        return Err(AlgebraError::ZeroMatrix);
    }
    let symbols = m.symbols();
    let cost = |i: usize, j: usize| m[(i, j)].num_terms();
    let (profile, values) = (0..GENERIC_POINTS)
        .map(|seed| {
            let v = m.evaluate(&generic_point(&symbols, seed));
            (v.rank_profile_by(cost), v)
        })
        .reduce(|best, next| if next.0.rank() > best.0.rank() { next } else { best })
        .expect("at least one point");
    let rank = profile.rank();
    if m.is_square() && rank == m.rows() {
        return Ok(Projection {
            value: m.determinant()?,
            rank,
            rows: profile.rows,
            cols: profile.cols,
            heuristic_unsound: false,
        });
    }
    let independent = profile.cols.iter().any(|&j| values.without_column(j).rank() < rank);
    let value = m.submatrix(&profile.rows, &profile.cols).determinant()?;
    Ok(Projection {
        value,
        rank,
        rows: profile.rows,
        cols: profile.cols,
        heuristic_unsound: !independent,
    })
}

/// Worst-case matrix dimension `N! * prod d_s` over the elimination symbols,
/// where `d_s` is the highest degree of `s` in the equations.
pub fn size_bound(eqs: &[Polynomial], elim: &[Symbol]) -> BigUint {
    let mut bound: BigUint = (1..=elim.len() as u64).product();
    for s in elim {
        let d = eqs.iter().map(|e| e.degree_in(s)).max().unwrap_or(0).max(1);
        bound *= BigUint::from(d);
    }
    bound
}
