use std::fmt::Write;

use num_traits::{One, Signed};

use super::DaeSystem;
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::rational;
use crate::symbol::SymbolTable;

/// Factors in ascending symbol order joined by `*`, powers as `^e`.
pub fn render_monomial(m: &Monomial, table: &SymbolTable) -> String {
    if m.is_one() {
        return "1".to_string();
    }
    let mut parts: Vec<String> = m
        .factors()
        .iter()
        .map(|(s, e)| {
            let name = table.display(s);
            if *e == 1 {
                name
            } else {
                format!("{name}^{e}")
            }
        })
        .collect();
    parts.reverse();
    parts.join("*")
}

/// Terms in ascending monomial order, e.g. `2*y1*y1' + 2*y2*y2'`.
/// The output parses back to the same polynomial.
pub fn render_polynomial(p: &Polynomial, table: &SymbolTable) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().enumerate() {
        let negative = c.is_negative();
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let mag = c.abs();
        if m.is_one() {
            out.push_str(&rational::format(&mag));
        } else if mag.is_one() {
            out.push_str(&render_monomial(m, table));
        } else {
            let _ = write!(out, "{}*{}", rational::format(&mag), render_monomial(m, table));
        }
    }
    out
}

/// The system in source form, one `eq <poly> = 0` line per equation.
pub fn render_system(sys: &DaeSystem) -> String {
    let mut out = format!("system {}\n", sys.name);
    let names = |syms: Vec<crate::symbol::Symbol>| -> String {
        syms.iter()
            .map(|s| sys.table.base_name(s).to_string())
            .collect::<Vec<_>>()
            .join(", ")
    };
    for (keyword, syms) in [
        ("param", sys.parameters()),
        ("func", sys.forcings()),
        ("var", sys.dependents()),
    ] {
        if !syms.is_empty() {
            let _ = writeln!(out, "{keyword} {}", names(syms));
        }
    }
    for eq in &sys.equations {
        let _ = writeln!(out, "eq {} = 0", render_polynomial(&eq.poly, &sys.table));
    }
    out
}
