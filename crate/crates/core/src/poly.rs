//! Sparse multivariate polynomials over the rationals.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::AlgebraError;
use crate::monomial::Monomial;
use crate::rational::{self, Rational};
use crate::symbol::Symbol;

/// Canonical sparse polynomial: a map from monomial to nonzero coefficient.
/// Iteration runs in ascending lexicographic order, so the leading term is
/// the last entry.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn from_int(v: i64) -> Self {
        Self::constant(rational::int(v))
    }

    pub fn var(sym: Symbol) -> Self {
        Self::term(Monomial::var(sym), Rational::one())
    }

    pub fn term(mono: Monomial, coeff: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(mono, coeff);
        }
        Polynomial { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(iter: I) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    /// `self += sign * a * b` in place.
    pub fn add_product(&mut self, a: &Polynomial, b: &Polynomial, negate: bool) {
        for (m1, c1) in &a.terms {
            for (m2, c2) in &b.terms {
                let c = if c1.is_integer() && c2.is_integer() {
                    Rational::from_integer(c1.numer() * c2.numer())
                } else {
                    c1 * c2
                };
                self.add_term(m1.mul(m2), if negate { -c } else { c });
            }
        }
    }

    fn add_term(&mut self, mono: Monomial, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value of a constant polynomial (zero included).
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self
                .terms
                .iter()
                .next()
                .filter(|(m, _)| m.is_one())
                .map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mono: &Monomial) -> Rational {
        self.terms.get(mono).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.leading_term().map_or_else(Rational::zero, |(_, c)| c.clone())
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.terms.keys().flat_map(|m| m.symbols()).collect()
    }

    pub fn mentions<F: Fn(&Symbol) -> bool>(&self, pred: F) -> bool {
        self.terms.keys().any(|m| m.symbols().any(|s| pred(&s)))
    }

    pub fn degree_in(&self, sym: &Symbol) -> u32 {
        self.terms.keys().map(|m| m.degree(sym)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_term(&self, mono: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        // Multiplying by a monomial is order preserving, so no merging occurs.
        Polynomial {
            terms: self.terms.iter().map(|(m, v)| (m.mul(mono), v * c)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Polynomial {
        let mut result = Polynomial::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact quotient `self / divisor`, by multivariate division under the
    /// lexicographic order. Fails if any step leaves a remainder.
    pub fn exact_div(&self, divisor: &Polynomial) -> Result<Polynomial, AlgebraError> {
        let (lead_m, lead_c) = divisor.leading_term().ok_or(AlgebraError::DivisionByZero)?;
        if let Some(c) = divisor.constant_value() {
            return Ok(self.scale(&c.recip()));
        }
        let mut rem = self.clone();
        let mut quot = Polynomial::zero();
        let inv = lead_c.recip();
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(lead_m).ok_or(AlgebraError::NotDivisible)?;
            let qc = c * &inv;
            for (dm, dc) in &divisor.terms {
                rem.add_term(dm.mul(&qm), -(dc * &qc));
            }
            quot.add_term(qm, qc);
        }
        Ok(quot)
    }

    /// Applies `d/dt`: dependent variables and forcing functions step up one
    /// derivative order, parameters are constants and `t' = 1`.
    pub fn total_derivative(&self) -> Result<Polynomial, AlgebraError> {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            for &(s, e) in m.factors() {
                let image = match s {
                    Symbol::Time => Some(Monomial::one()),
                    Symbol::Parameter(_) => None,
                    other => other.derivative()?.map(Monomial::var),
                };
                if let Some(image) = image {
                    let (_, rest) = m.without_one(&s).expect("symbol present");
                    out.add_term(rest.mul(&image), c * rational::int(e as i64));
                }
            }
        }
        Ok(out)
    }

    /// Formal partial derivative with respect to one symbol.
    pub fn partial_derivative(&self, sym: &Symbol) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            if let Some((e, rest)) = m.without_one(sym) {
                out.add_term(rest, c * rational::int(e as i64));
            }
        }
        out
    }

    /// Renames symbols; symbols absent from `mapping` are left alone.
    pub fn substitute(&self, mapping: &HashMap<Symbol, Symbol>) -> Polynomial {
        if mapping.is_empty() {
            return self.clone();
        }
        self.map_symbols(|s| mapping.get(&s).copied().unwrap_or(s))
    }

    pub fn map_symbols<F: Fn(Symbol) -> Symbol>(&self, f: F) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| (m.map_symbols(&f), c.clone())))
    }

    /// Replaces symbols by rational values.
    pub fn evaluate_partial(&self, values: &HashMap<Symbol, Rational>) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for &(s, e) in m.factors() {
                match values.get(&s) {
                    Some(v) => coeff *= num_traits::pow(v.clone(), e as usize),
                    None => rest.push((s, e)),
                }
            }
            out.add_term(Monomial::from_factors(rest), coeff);
        }
        out
    }

    /// Groups terms by their monomial over `split`:
    /// `self = sum(key * value)` with values free of `split`.
    pub fn coefficient_decomposition(&self, split: &BTreeSet<Symbol>) -> BTreeMap<Monomial, Polynomial> {
        let mut out: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (key, rest) = m.split(|s| split.contains(s));
            out.entry(key).or_default().add_term(rest, c.clone());
        }
        out
    }

    /// Coefficients of `self` viewed as a univariate polynomial in `sym`,
    /// indexed by degree.
    pub fn to_univariate(&self, sym: &Symbol) -> Vec<Polynomial> {
        let mut coeffs = vec![Polynomial::zero(); self.degree_in(sym) as usize + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.remove(sym);
            coeffs[e as usize].add_term(rest, c.clone());
        }
        coeffs
    }

    pub fn from_univariate(coeffs: &[Polynomial], sym: &Symbol) -> Polynomial {
        let mut out = Polynomial::zero();
        for (e, c) in coeffs.iter().enumerate() {
            let x = Monomial::power(*sym, e as u32);
            for (m, v) in &c.terms {
                out.add_term(m.mul(&x), v.clone());
            }
        }
        out
    }

    /// Positive rational content: every coefficient is an integer multiple
    /// of it and the quotients are coprime.
    pub fn rational_content(&self) -> Rational {
        self.terms
            .values()
            .fold(Rational::zero(), |acc, c| rational::gcd(&acc, c))
    }

    /// Largest monomial dividing every term; `1` for the zero polynomial.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        it.fold(first.clone(), |acc, m| acc.gcd(m))
    }

    /// Associate with coprime integer coefficients and a positive leading
    /// coefficient.
    pub fn normalized(&self) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut content = self.rational_content();
        if self.leading_coefficient().is_negative() {
            content = -content;
        }
        self.scale(&content.recip())
    }

    /// If `self = c * other` for a nonzero rational `c`, returns `c`.
    pub fn rational_multiple_of(&self, other: &Polynomial) -> Option<Rational> {
        if self.is_zero() || other.is_zero() || self.num_terms() != other.num_terms() {
            return None;
        }
        let (m, c) = self.leading_term()?;
        let (om, oc) = other.leading_term()?;
        if m != om {
            return None;
        }
        let ratio = c / oc;
        (&other.scale(&ratio) == self).then_some(ratio)
    }

    pub fn eval_f64<F: Fn(&Symbol) -> Option<f64>>(&self, value: F) -> Option<f64> {
        let mut total = 0.0;
        for (m, c) in &self.terms {
            let mut t = rational::to_f64(c);
            for (s, e) in m.factors() {
                t *= value(s)?.powi(*e as i32);
            }
            total += t;
        }
        Some(total)
    }
}

impl From<Symbol> for Polynomial {
    fn from(s: Symbol) -> Self {
        Polynomial::var(s)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
