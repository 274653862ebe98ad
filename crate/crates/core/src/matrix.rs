//! Dense matrices of polynomials and fraction-free elimination.

use std::collections::{BTreeSet, HashMap};
use std::ops::{Index, IndexMut};

use num_traits::Zero;

use crate::error::AlgebraError;
use crate::poly::Polynomial;
use crate::rational::Rational;
use crate::symbol::Symbol;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

/// Pivot positions found by fraction-free elimination. The submatrix on
/// `rows` x `cols` of the original matrix is non-singular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankProfile {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl RankProfile {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            entries: vec![Polynomial::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Polynomial::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Polynomial>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        PolyMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Polynomial] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = &Polynomial> {
        (0..self.rows).map(move |i| &self[(i, j)])
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        PolyMatrix::from_rows(
            rows.iter()
                .map(|&i| cols.iter().map(|&j| self[(i, j)].clone()).collect())
                .collect(),
        )
    }

    pub fn without_column(&self, skip: usize) -> PolyMatrix {
        let cols: Vec<usize> = (0..self.cols).filter(|&j| j != skip).collect();
        let rows: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&rows, &cols)
    }

    /// Exact determinant. Small matrices use division-free expansion by
    /// minors, larger ones [`Self::bareiss_determinant`].
    pub fn determinant(&self) -> Result<Polynomial, AlgebraError> {
        if !self.is_square() {
            return Err(AlgebraError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if self.rows <= MINOR_EXPANSION_LIMIT {
            Ok(self.minor_expansion())
        } else {
            self.bareiss_determinant()
        }
    }

    /// Laplace expansion along successive rows with every minor of the
    /// bottom rows memoized by its column set.
    fn minor_expansion(&self) -> Polynomial {
        let n = self.rows;
        let mut minors: HashMap<u32, Polynomial> = HashMap::from([(0, Polynomial::one())]);
        for i in (0..n).rev() {
            let mut next: HashMap<u32, Polynomial> = HashMap::new();
            for (&mask, minor) in &minors {
                let mut sign_negative = false;
                for j in 0..n {
                    if mask & (1 << j) != 0 {
                        sign_negative = !sign_negative;
                        continue;
                    }
                    let a = &self[(i, j)];
                    if a.is_zero() {
                        continue;
                    }
                    next.entry(mask | (1 << j))
                        .or_insert_with(Polynomial::zero)
                        .add_product(a, minor, sign_negative);
                }
            }
            next.retain(|_, p| !p.is_zero());
            minors = next;
        }
        minors.remove(&((1u32 << n) - 1)).unwrap_or_else(Polynomial::zero)
    }

    /// Exact determinant by single-step Bareiss elimination. Pivots are the
    /// nonzero entries with the fewest terms; row swaps flip the sign.
    pub fn bareiss_determinant(&self) -> Result<Polynomial, AlgebraError> {
        if !self.is_square() {
            return Err(AlgebraError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Polynomial::one());
        }
        let mut m = self.clone();
        let mut negate = false;
        let mut prev = Polynomial::one();
        for k in 0..n {
            let Some(p) = fewest_terms_pivot(&m, k, k..n) else {
                return Ok(Polynomial::zero());
            };
            if p != k {
                m.swap_rows(p, k);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[(i, j)] * &m[(k, k)]) - &(&m[(i, k)] * &m[(k, j)]);
                    m[(i, j)] = num.exact_div(&prev)?;
                }
                m[(i, k)] = Polynomial::zero();
            }
            prev = m[(k, k)].clone();
        }
        let det = m[(n - 1, n - 1)].clone();
        Ok(if negate { -det } else { det })
    }

    /// Fraction-free row echelon reduction, reporting the pivot rows and
    /// columns (in terms of the original indices).
    pub fn rank_profile(&self) -> Result<RankProfile, AlgebraError> {
        let mut m = self.clone();
        let mut order: Vec<usize> = (0..self.rows).collect();
        let mut prev = Polynomial::one();
        let mut profile = RankProfile {
            rows: Vec::new(),
            cols: Vec::new(),
        };
        let mut k = 0;
        for col in 0..self.cols {
            if k == self.rows {
                break;
            }
            let Some(p) = fewest_terms_pivot(&m, col, k..self.rows) else {
                continue;
            };
            m.swap_rows(p, k);
            order.swap(p, k);
            for i in k + 1..self.rows {
                for j in col + 1..self.cols {
                    let num = &(&m[(i, j)] * &m[(k, col)]) - &(&m[(i, col)] * &m[(k, j)]);
                    m[(i, j)] = num.exact_div(&prev)?;
                }
                m[(i, col)] = Polynomial::zero();
            }
            prev = m[(k, col)].clone();
            profile.rows.push(order[k]);
            profile.cols.push(col);
            k += 1;
        }
        let mut pairs: Vec<(usize, usize)> = profile.rows.iter().copied().zip(profile.cols.iter().copied()).collect();
        pairs.sort();
        profile.rows = pairs.iter().map(|p| p.0).collect();
        profile.cols.sort();
        Ok(profile)
    }

    pub fn rank(&self) -> Result<usize, AlgebraError> {
        Ok(self.rank_profile()?.rank())
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.entries.iter().flat_map(Polynomial::symbols).collect()
    }

    /// Substitutes a value for every symbol. Symbols missing from `values`
    /// evaluate to zero.
    pub fn evaluate(&self, values: &HashMap<Symbol, Rational>) -> RationalMatrix {
        let entries = self
            .entries
            .iter()
            .map(|p| {
                p.terms()
                    .map(|(m, c)| {
                        m.factors().iter().fold(c.clone(), |acc, (s, e)| {
                            let v = values.get(s).cloned().unwrap_or_else(Rational::zero);
                            acc * num_traits::pow(v, *e as usize)
                        })
                    })
                    .fold(Rational::zero(), |a, b| a + b)
            })
            .collect();
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }
}

const MINOR_EXPANSION_LIMIT: usize = 12;

/// Dense matrix over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn without_column(&self, skip: usize) -> RationalMatrix {
        let entries = self
            .entries
            .iter()
            .enumerate()
            .filter(|(k, _)| k % self.cols != skip)
            .map(|(_, v)| v.clone())
            .collect();
        RationalMatrix {
            rows: self.rows,
            cols: self.cols - 1,
            entries,
        }
    }

    /// Gaussian elimination over the rationals. Among the nonzero candidates
    /// of a column the pivot minimizes `cost(original_row, col)`.
    pub fn rank_profile_by<F: Fn(usize, usize) -> usize>(&self, cost: F) -> RankProfile {
        let mut m = self.entries.clone();
        let c = self.cols;
        let mut order: Vec<usize> = (0..self.rows).collect();
        let mut pairs = Vec::new();
        let mut k = 0;
        for col in 0..c {
            if k == self.rows {
                break;
            }
            let Some(p) = (k..self.rows)
                .filter(|&i| !m[i * c + col].is_zero())
                .min_by_key(|&i| (cost(order[i], col), i))
            else {
                continue;
            };
            for j in 0..c {
                m.swap(p * c + j, k * c + j);
            }
            order.swap(p, k);
            let pivot = m[k * c + col].clone();
            for i in k + 1..self.rows {
                let f = &m[i * c + col] / &pivot;
                if f.is_zero() {
                    continue;
                }
                for j in col..c {
                    let d = &f * &m[k * c + j];
                    m[i * c + j] -= d;
                }
            }
            pairs.push((order[k], col));
            k += 1;
        }
        pairs.sort();
        let mut cols: Vec<usize> = pairs.iter().map(|p| p.1).collect();
        cols.sort();
        RankProfile {
            rows: pairs.iter().map(|p| p.0).collect(),
            cols,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank_profile_by(|_, _| 0).rank()
    }
}

fn fewest_terms_pivot(m: &PolyMatrix, col: usize, rows: std::ops::Range<usize>) -> Option<usize> {
    rows.filter(|&i| !m[(i, col)].is_zero())
        .min_by_key(|&i| (m[(i, col)].num_terms(), i))
}

impl Index<(usize, usize)> for PolyMatrix {
    type Output = Polynomial;
    fn index(&self, (i, j): (usize, usize)) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for PolyMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Polynomial {
        &mut self.entries[i * self.cols + j]
    }
}
