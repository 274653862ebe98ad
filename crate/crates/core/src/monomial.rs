use std::cmp::Ordering;

use crate::symbol::Symbol;

/// A power product. Factors are kept sorted by descending symbol with
/// strictly positive exponents, so the empty product is the unit monomial.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    factors: Vec<(Symbol, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(sym: Symbol) -> Self {
        Self::power(sym, 1)
    }

    pub fn power(sym: Symbol, exp: u32) -> Self {
        if exp == 0 {
            Self::one()
        } else {
            Monomial {
                factors: vec![(sym, exp)],
            }
        }
    }

    /// Builds a monomial from arbitrary `(symbol, exponent)` pairs, merging
    /// repeats and dropping zero exponents.
    pub fn from_factors<I: IntoIterator<Item = (Symbol, u32)>>(iter: I) -> Self {
        let mut factors: Vec<(Symbol, u32)> = iter.into_iter().filter(|f| f.1 > 0).collect();
        factors.sort_by_key(|f| std::cmp::Reverse(f.0));
        let mut merged: Vec<(Symbol, u32)> = Vec::with_capacity(factors.len());
        for (s, e) in factors {
            match merged.last_mut() {
                Some(last) if last.0 == s => last.1 += e,
                _ => merged.push((s, e)),
            }
        }
        Monomial { factors: merged }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Factors in descending symbol order.
    pub fn factors(&self) -> &[(Symbol, u32)] {
        &self.factors
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.factors.iter().map(|f| f.0)
    }

    pub fn degree(&self, sym: &Symbol) -> u32 {
        self.factors.iter().find(|f| f.0 == *sym).map_or(0, |f| f.1)
    }

    pub fn total_degree(&self) -> u32 {
        self.factors.iter().map(|f| f.1).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.factors, &other.factors);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial { factors: out }
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.factors.len());
        let mut j = 0;
        for &(s, e) in &self.factors {
            if j < other.factors.len() && other.factors[j].0 == s {
                let d = other.factors[j].1;
                if d > e {
                    return None;
                }
                if e > d {
                    out.push((s, e - d));
                }
                j += 1;
            } else if j < other.factors.len() && other.factors[j].0 > s {
                return None;
            } else {
                out.push((s, e));
            }
        }
        if j < other.factors.len() {
            return None;
        }
        Some(Monomial { factors: out })
    }

    /// Largest monomial dividing both.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let factors = self
            .factors
            .iter()
            .filter_map(|&(s, e)| {
                let d = other.degree(&s);
                (d > 0).then_some((s, e.min(d)))
            })
            .collect();
        Monomial { factors }
    }

    /// Splits into the part over symbols satisfying `pred` and the rest.
    pub fn split<F: Fn(&Symbol) -> bool>(&self, pred: F) -> (Monomial, Monomial) {
        let (inside, outside): (Vec<_>, Vec<_>) = self.factors.iter().partition(|f| pred(&f.0));
        (Monomial { factors: inside }, Monomial { factors: outside })
    }

    /// Removes one power of `sym`, returning the previous exponent.
    pub fn without_one(&self, sym: &Symbol) -> Option<(u32, Monomial)> {
        let pos = self.factors.iter().position(|f| f.0 == *sym)?;
        let exp = self.factors[pos].1;
        let mut factors = self.factors.clone();
        if exp == 1 {
            factors.remove(pos);
        } else {
            factors[pos].1 -= 1;
        }
        Some((exp, Monomial { factors }))
    }

    /// Removes `sym` entirely, returning its exponent and the rest.
    pub fn remove(&self, sym: &Symbol) -> (u32, Monomial) {
        match self.factors.iter().position(|f| f.0 == *sym) {
            Some(pos) => {
                let mut factors = self.factors.clone();
                let (_, e) = factors.remove(pos);
                (e, Monomial { factors })
            }
            None => (0, self.clone()),
        }
    }

    pub fn map_symbols<F: Fn(Symbol) -> Symbol>(&self, f: F) -> Monomial {
        Monomial::from_factors(self.factors.iter().map(|&(s, e)| (f(s), e)))
    }

    pub fn leading_symbol(&self) -> Option<Symbol> {
        self.factors.first().map(|f| f.0)
    }
}

impl Ord for Monomial {
    /// Pure lexicographic order driven by the global symbol order.
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.factors.iter().zip(other.factors.iter()) {
            match a.0.cmp(&b.0) {
                Ordering::Equal => match a.1.cmp(&b.1) {
                    Ordering::Equal => continue,
                    o => return o,
                },
                o => return o,
            }
        }
        self.factors.len().cmp(&other.factors.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
