//! Multivariate GCD by recursive content / primitive-part reduction, with the
//! subresultant polynomial remainder sequence at each univariate level.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::Polynomial;
use crate::rational::{self, Rational};
use crate::symbol::Symbol;

/// Greatest common divisor, normalized to a positive leading coefficient.
///
/// Numeric content is part of the result: `gcd(2xy, 4x^2) = 2x`.
pub fn multivariate_gcd(p: &Polynomial, q: &Polynomial) -> Polynomial {
    positive(gcd_rec(p, q))
}

/// Screens `p` for repeated factors. For each symbol `x`, every other symbol
/// is set to a fixed pseudo-random value and the image is tested for a
/// repeated root in `x`. A repeated factor of `p` always shows up in these
/// images unless the point is special, so `false` is reliable up to that
/// chance; `true` may occasionally be a false alarm.
pub fn may_have_repeated_factor(p: &Polynomial) -> bool {
    let symbols = p.symbols();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let point: HashMap<Symbol, Rational> = symbols
        .iter()
        .map(|&s| (s, Rational::from_integer(rng.gen_range(1i64..1 << 31).into())))
        .collect();
    symbols.iter().any(|x| {
        let mut values = point.clone();
        values.remove(x);
        let image: Vec<Rational> = p
            .evaluate_partial(&values)
            .to_univariate(x)
            .iter()
            .map(|c| c.constant_value().unwrap_or_else(Rational::zero))
            .collect();
        let derivative: Vec<Rational> = image
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * Rational::from_integer((k as i64).into()))
            .collect();
        univariate_gcd_degree(image, derivative) > 0
    })
}

/// Degree of the gcd of two dense univariate polynomials over the rationals
/// (coefficients in ascending degree).
fn univariate_gcd_degree(mut a: Vec<Rational>, mut b: Vec<Rational>) -> usize {
    let strip = |v: &mut Vec<Rational>| {
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
    };
    strip(&mut a);
    strip(&mut b);
    while !b.is_empty() {
        while a.len() >= b.len() {
            let f = a.last().expect("nonempty") / b.last().expect("nonempty");
            let shift = a.len() - b.len();
            for (i, bc) in b.iter().enumerate() {
                a[i + shift] -= &f * bc;
            }
            a.pop();
            strip(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

fn positive(p: Polynomial) -> Polynomial {
    if p.leading_coefficient().is_negative() {
        -p
    } else {
        p
    }
}

fn gcd_rec(p: &Polynomial, q: &Polynomial) -> Polynomial {
    if p.is_zero() {
        return positive(q.clone());
    }
    if q.is_zero() {
        return positive(p.clone());
    }
    if let (Some(a), Some(b)) = (p.constant_value(), q.constant_value()) {
        return Polynomial::constant(rational::gcd(&a, &b));
    }
    if p.num_terms() == 1 || q.num_terms() == 1 {
        let (single, other) = if p.num_terms() == 1 { (p, q) } else { (q, p) };
        let (m, c) = single.leading_term().expect("nonzero");
        let mono = m.gcd(&other.monomial_content());
        return Polynomial::term(mono, rational::gcd(c, &other.rational_content()));
    }
    let main = main_symbol(p, q);
    let pu = p.to_univariate(&main);
    let qu = q.to_univariate(&main);
    let cp = content(&pu);
    let cq = content(&qu);
    let c = gcd_rec(&cp, &cq);
    if pu.len() == 1 || qu.len() == 1 {
        // One side is free of the main variable: the gcd divides its content.
        return c;
    }
    let pp = primitive(&pu, &cp);
    let qp = primitive(&qu, &cq);
    let g = subresultant_gcd(pp, qp);
    if g.len() == 1 {
        return c;
    }
    let cg = content(&g);
    let g = primitive(&g, &cg);
    let g = positive(Polynomial::from_univariate(&g, &main));
    &c * &g
}

fn main_symbol(p: &Polynomial, q: &Polynomial) -> Symbol {
    let mut syms = p.symbols();
    syms.extend(q.symbols());
    *syms.iter().next_back().expect("non-constant operand")
}

/// Content of a univariate polynomial over the recursive coefficient ring.
fn content(coeffs: &[Polynomial]) -> Polynomial {
    let mut g = Polynomial::zero();
    for c in coeffs.iter().rev() {
        if c.is_zero() {
            continue;
        }
        g = gcd_rec(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive(coeffs: &[Polynomial], content: &Polynomial) -> Vec<Polynomial> {
    coeffs
        .iter()
        .map(|c| c.exact_div(content).expect("content divides every coefficient"))
        .collect()
}

fn degree(u: &[Polynomial]) -> usize {
    u.len() - 1
}

fn trim(mut u: Vec<Polynomial>) -> Vec<Polynomial> {
    while u.len() > 1 && u.last().is_some_and(Polynomial::is_zero) {
        u.pop();
    }
    u
}

fn is_zero(u: &[Polynomial]) -> bool {
    u.iter().all(Polynomial::is_zero)
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
fn pseudo_remainder(a: &[Polynomial], b: &[Polynomial]) -> Vec<Polynomial> {
    let db = degree(b);
    let lb = &b[db];
    let mut r = a.to_vec();
    let mut steps = degree(a) + 1 - db;
    while !is_zero(&r) && degree(&r) >= db {
        let dr = degree(&r);
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] = &r[i + shift] - &(&lr * bc);
        }
        r = trim(r);
        steps -= 1;
    }
    if steps > 0 {
        let f = lb.pow(steps as u32);
        for c in r.iter_mut() {
            *c = &*c * &f;
        }
    }
    trim(r)
}

/// Last nonzero member of the subresultant PRS of two primitive inputs.
/// The result is a constant (length-1 vector) when they are coprime.
fn subresultant_gcd(a: Vec<Polynomial>, b: Vec<Polynomial>) -> Vec<Polynomial> {
    let (mut a, mut b) = if degree(&a) >= degree(&b) { (a, b) } else { (b, a) };
    let mut g = Polynomial::one();
    let mut h = Polynomial::one();
    loop {
        let delta = degree(&a) - degree(&b);
        let r = pseudo_remainder(&a, &b);
        if is_zero(&r) {
            return b;
        }
        if degree(&r) == 0 {
            return vec![Polynomial::one()];
        }
        let divisor = &g * &h.pow(delta as u32);
        let next: Vec<Polynomial> = r
            .iter()
            .map(|c| c.exact_div(&divisor).expect("subresultant division is exact"))
            .collect();
        a = b;
        b = next;
        g = a[degree(&a)].clone();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta as u32)
                .exact_div(&h.pow(delta as u32 - 1))
                .expect("subresultant h update is exact")
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn v(i: u32) -> Polynomial {
        Polynomial::var(Symbol::dependent(i, 0))
    }

    #[test]
    fn monomial_gcd_keeps_integer_content() {
        let x = v(1);
        let y = v(0);
        let a = (&x * &y).scale(&int(2));
        let b = (&x * &x).scale(&int(4));
        assert_eq!(multivariate_gcd(&a, &b), x.scale(&int(2)));
    }

    #[test]
    fn repeated_factor_screen() {
        let (x, y) = (v(0), v(1));
        let f = &(&x * &y) + &Polynomial::one();
        let g = &x - &(&y * &y);
        assert!(!may_have_repeated_factor(&(&f * &g)));
        assert!(may_have_repeated_factor(&(&(&f * &f) * &g)));
        assert!(may_have_repeated_factor(&(&g * &g)));
        assert!(!may_have_repeated_factor(&Polynomial::from_int(4)));
    }

    #[test]
    fn single_term_operand() {
        let (x, y) = (v(0), v(1));
        let a = (&(&x * &x) * &y).scale(&int(6));
        let b = &(&x * &y).scale(&int(4)) + &(&x * &x).scale(&int(8));
        assert_eq!(multivariate_gcd(&a, &b), x.scale(&int(2)));
        assert_eq!(multivariate_gcd(&b, &a), x.scale(&int(2)));
    }

    #[test]
    fn gcd_with_zero_is_normalized_input() {
        let p = -(&v(0) + &Polynomial::from_int(3));
        assert_eq!(multivariate_gcd(&p, &Polynomial::zero()), -p.clone());
        assert_eq!(multivariate_gcd(&Polynomial::zero(), &p), -p);
    }

    #[test]
    fn recovers_common_factor() {
        let (x, y, z) = (v(0), v(1), v(2));
        let g = &(&x * &y) + &(&z + &Polynomial::one());
        let a = &(&x * &x) - &y;
        let b = &(&y * &z) + &x;
        let ga = &g * &a;
        let gb = &g * &b;
        let r = multivariate_gcd(&ga, &gb);
        assert!(r.rational_multiple_of(&g).is_some(), "got {r:?}");
    }

    #[test]
    fn gcd_of_self_is_associate() {
        let (x, y) = (v(0), v(1));
        let p = &(&x * &y).scale(&int(-3)) + &(&y * &y);
        let g = multivariate_gcd(&p, &p);
        assert!(g.rational_multiple_of(&p).is_some());
    }

    #[test]
    fn univariate_subresultant_case() {
        let x = v(0);
        let one = Polynomial::one();
        let a = &(&x - &one).pow(2) * &(&x + &Polynomial::from_int(2));
        let b = &(&x - &one) * &(&x + &Polynomial::from_int(5));
        let g = multivariate_gcd(&a, &b);
        assert_eq!(g, &x - &one);
    }
}
