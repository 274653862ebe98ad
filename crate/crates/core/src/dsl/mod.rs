//! The `.dae` system format and polynomial rendering.
//!
//! ```text
//! system gear
//! param eta
//! func p1, p2
//! var y1, y2
//! eq y1' + (1+eta)*y2 + eta*t*y2' = p1
//! eq y1 + eta*t*y2 = p2
//! ```
//!
//! Each `eq lhs = rhs` is stored as the polynomial `lhs - rhs`.

pub mod lexer;
mod parser;
mod render;

use std::collections::BTreeSet;
use std::fmt;

use crate::poly::Polynomial;
use crate::symbol::{Symbol, SymbolTable};

pub use parser::{parse_system, ParseError};
pub use render::{render_monomial, render_polynomial, render_system};

/// One equation `poly = 0`, tagged with where it came from: the index of the
/// original equation and how many times it has been differentiated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub origin: usize,
    pub derivative: u32,
    pub poly: Polynomial,
}

impl Equation {
    pub fn original(origin: usize, poly: Polynomial) -> Self {
        Equation {
            origin,
            derivative: 0,
            poly,
        }
    }

    /// `f3`, `D(f3)`, `D(f3,2)`.
    pub fn label(&self) -> String {
        let base = format!("f{}", self.origin + 1);
        match self.derivative {
            0 => base,
            1 => format!("D({base})"),
            k => format!("D({base},{k})"),
        }
    }

    /// Highest derivative order of any dependent variable in the equation.
    pub fn order(&self) -> u32 {
        self.poly
            .symbols()
            .iter()
            .filter(|s| s.is_dependent())
            .map(Symbol::order)
            .max()
            .unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DaeSystem {
    pub name: String,
    pub table: SymbolTable,
    pub equations: Vec<Equation>,
}

impl DaeSystem {
    pub fn parameters(&self) -> Vec<Symbol> {
        self.table.parameters().collect()
    }

    pub fn forcings(&self) -> Vec<Symbol> {
        self.table.forcings().collect()
    }

    /// Dependent variables in declaration order.
    pub fn dependents(&self) -> Vec<Symbol> {
        self.table.dependents().collect()
    }

    pub fn lookup_dependent(&self, name: &str) -> Option<Symbol> {
        self.table.lookup(name).filter(Symbol::is_dependent)
    }

    /// `r_j`: the highest derivative order of each dependent variable over
    /// all equations, in declaration order.
    pub fn max_orders(&self) -> Vec<u32> {
        let mut orders = vec![0; self.table.dependents().count()];
        for eq in &self.equations {
            for s in eq.poly.symbols() {
                if let Some(j) = s.dependent_index() {
                    orders[j as usize] = orders[j as usize].max(s.order());
                }
            }
        }
        orders
    }

    /// Every dependent-variable symbol (any order) occurring in the equations.
    pub fn dependent_symbols(&self) -> BTreeSet<Symbol> {
        self.equations
            .iter()
            .flat_map(|e| e.poly.symbols())
            .filter(Symbol::is_dependent)
            .collect()
    }

    pub fn display_symbol(&self, sym: &Symbol) -> String {
        self.table.display(sym)
    }

    pub fn render(&self, p: &Polynomial) -> String {
        render_polynomial(p, &self.table)
    }
}

impl fmt::Display for DaeSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_system(self))
    }
}
