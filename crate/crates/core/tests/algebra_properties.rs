//! Property tests for polynomial arithmetic, derivation, gcd and
//! determinants, each against an independent oracle.

use std::collections::{BTreeSet, HashMap};

use daelim_core::dsl::{parse_system, render_system, DaeSystem};
use daelim_core::{multivariate_gcd, Monomial, PolyMatrix, Polynomial, Rational, Symbol};
use proptest::prelude::*;

const SYSTEM: &str = "system props\nparam a, b\nfunc u\nvar y, z\n";

fn system() -> DaeSystem {
    parse_system(&format!("{SYSTEM}eq y + z = 0\n")).unwrap()
}

fn derivative(s: Symbol, k: u32) -> Symbol {
    (0..k).fold(s, |acc, _| acc.derivative().unwrap().unwrap())
}

/// Time, two parameters, a forcing function and its derivative, and two
/// dependent variables with derivatives.
fn symbols() -> Vec<Symbol> {
    let sys = system();
    let u = sys.table.lookup("u").unwrap();
    let y = sys.lookup_dependent("y").unwrap();
    let z = sys.lookup_dependent("z").unwrap();
    vec![
        Symbol::Time,
        sys.table.lookup("a").unwrap(),
        sys.table.lookup("b").unwrap(),
        u,
        derivative(u, 1),
        y,
        derivative(y, 1),
        derivative(y, 2),
        z,
        derivative(z, 1),
    ]
}

fn poly_from(terms: &[(Vec<u32>, i64)], syms: &[Symbol]) -> Polynomial {
    Polynomial::from_terms(terms.iter().map(|(exps, c)| {
        (
            Monomial::from_factors(syms.iter().copied().zip(exps.iter().copied())),
            Rational::from_integer((*c).into()),
        )
    }))
}

fn poly_over(n_syms: usize, max_terms: usize, max_exp: u32) -> impl Strategy<Value = Polynomial> {
    let syms: Vec<Symbol> = symbols().into_iter().take(n_syms).collect();
    prop::collection::vec((prop::collection::vec(0..=max_exp, n_syms), -9i64..=9), 0..=max_terms)
        .prop_map(move |terms| poly_from(&terms, &syms))
}

fn poly() -> impl Strategy<Value = Polynomial> {
    poly_over(10, 4, 2)
}

fn nonzero_poly() -> impl Strategy<Value = Polynomial> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn evaluate(p: &Polynomial, point: &HashMap<Symbol, Rational>) -> Rational {
    p.evaluate_partial(point)
        .constant_value()
        .unwrap_or_else(|| Rational::from_integer(0.into()))
}

fn point() -> impl Strategy<Value = HashMap<Symbol, Rational>> {
    prop::collection::vec(-20i64..=20, 10).prop_map(|vals| {
        symbols()
            .into_iter()
            .zip(vals)
            .map(|(s, v)| (s, Rational::from_integer(v.into())))
            .collect()
    })
}

fn laplace(m: &[Vec<Polynomial>]) -> Polynomial {
    if m.is_empty() {
        return Polynomial::one();
    }
    let mut acc = Polynomial::zero();
    for j in 0..m.len() {
        let minor: Vec<Vec<Polynomial>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * &laplace(&minor);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

fn square_matrix(max_n: usize) -> impl Strategy<Value = Vec<Vec<Polynomial>>> {
    (1..=max_n).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(poly_over(3, 3, 1), n), n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn derivation_is_additive(p in poly(), q in poly()) {
        let lhs = (&p + &q).total_derivative().unwrap();
        let rhs = &p.total_derivative().unwrap() + &q.total_derivative().unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivation_obeys_leibniz(p in poly(), q in poly()) {
        let lhs = (&p * &q).total_derivative().unwrap();
        let rhs = &(&p.total_derivative().unwrap() * &q) + &(&p * &q.total_derivative().unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exact_division_roundtrip(p in poly(), q in nonzero_poly()) {
        prop_assert_eq!((&p * &q).exact_div(&q).unwrap(), p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn product_agrees_with_pointwise_product(p in poly(), q in poly(), pt in point()) {
        prop_assert_eq!(evaluate(&(&p * &q), &pt), evaluate(&p, &pt) * evaluate(&q, &pt));
    }

    #[test]
    fn gcd_divides_and_keeps_common_factor(
        f in poly_over(4, 3, 1),
        p in poly_over(4, 3, 2),
        q in poly_over(4, 3, 2),
    ) {
        prop_assume!(!f.is_zero() && !p.is_zero() && !q.is_zero());
        let (fp, fq) = (&f * &p, &f * &q);
        let g = multivariate_gcd(&fp, &fq);
        prop_assert!(fp.exact_div(&g).is_ok());
        prop_assert!(fq.exact_div(&g).is_ok());
        prop_assert!(g.exact_div(&f).is_ok());
    }

    #[test]
    fn coefficient_decomposition_reconstructs(p in poly(), mask in prop::collection::vec(any::<bool>(), 10)) {
        let split: BTreeSet<Symbol> = symbols().into_iter().zip(mask).filter(|(_, m)| *m).map(|(s, _)| s).collect();
        let mut acc = Polynomial::zero();
        for (key, value) in p.coefficient_decomposition(&split) {
            prop_assert!(!value.mentions(|s| split.contains(s)));
            acc = &acc + &value.mul_term(&key, &Rational::from_integer(1.into()));
        }
        prop_assert_eq!(acc, p);
    }

    #[test]
    fn render_then_parse_is_identity(p in nonzero_poly()) {
        let sys = system();
        let src = format!("{}\neq {} = 0\n", render_system(&sys), sys.render(&p));
        let parsed = parse_system(&src).unwrap();
        prop_assert_eq!(&parsed.equations.last().unwrap().poly, &p);
    }

    #[test]
    fn determinant_matches_laplace(m in square_matrix(4)) {
        let pm = PolyMatrix::from_rows(m.clone());
        let expected = laplace(&m);
        prop_assert_eq!(pm.determinant().unwrap(), expected.clone());
        prop_assert_eq!(pm.bareiss_determinant().unwrap(), expected);
    }

    #[test]
    fn row_swap_negates_determinant(m in square_matrix(4), a in 0usize..4, b in 0usize..4) {
        let n = m.len();
        prop_assume!(a < n && b < n && a != b);
        let pm = PolyMatrix::from_rows(m);
        let mut swapped = pm.clone();
        swapped.swap_rows(a, b);
        prop_assert_eq!(swapped.determinant().unwrap(), -pm.determinant().unwrap());
    }
}
