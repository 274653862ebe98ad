//! Indeterminates and the name table that gives them a printable form.
//!
//! A [`Symbol`] is a plain value: derivative and barred variants are built by
//! changing fields, so differentiating never needs to touch the table.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::AlgebraError;

/// Coarse classification of a [`Symbol`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    Time,
    Dependent,
    Derivative,
    Parameter,
    Forcing,
    ForcingDerivative,
    Barred,
}

/// An indeterminate of the polynomial ring.
///
/// Identity is `(base, order, barred)`. The total order is the global
/// elimination order: time, then parameters, then forcing functions, then
/// dependent variables; within a dependent variable `y1 < y1' < y1'' < y2`,
/// and every barred twin sits immediately below its unbarred counterpart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    Time,
    Parameter(u32),
    Forcing { index: u32, order: u32 },
    Dependent { index: u32, order: u32, barred: bool },
}

impl Symbol {
    pub fn dependent(index: u32, order: u32) -> Self {
        Symbol::Dependent {
            index,
            order,
            barred: false,
        }
    }

    pub fn forcing(index: u32, order: u32) -> Self {
        Symbol::Forcing { index, order }
    }

    pub fn kind(&self) -> SymbolKind {
        match *self {
            Symbol::Time => SymbolKind::Time,
            Symbol::Parameter(_) => SymbolKind::Parameter,
            Symbol::Forcing { order: 0, .. } => SymbolKind::Forcing,
            Symbol::Forcing { .. } => SymbolKind::ForcingDerivative,
            Symbol::Dependent { barred: true, .. } => SymbolKind::Barred,
            Symbol::Dependent { order: 0, .. } => SymbolKind::Dependent,
            Symbol::Dependent { .. } => SymbolKind::Derivative,
        }
    }

    /// Derivative order; 0 for anything that is not a derivative.
    pub fn order(&self) -> u32 {
        match *self {
            Symbol::Forcing { order, .. } | Symbol::Dependent { order, .. } => order,
            _ => 0,
        }
    }

    /// The underlying order-0, unbarred symbol.
    pub fn base(&self) -> Symbol {
        match *self {
            Symbol::Forcing { index, .. } => Symbol::forcing(index, 0),
            Symbol::Dependent { index, .. } => Symbol::dependent(index, 0),
            other => other,
        }
    }

    /// Index of the dependent variable this symbol belongs to, if any.
    pub fn dependent_index(&self) -> Option<u32> {
        match *self {
            Symbol::Dependent { index, .. } => Some(index),
            _ => None,
        }
    }

    pub fn is_dependent(&self) -> bool {
        matches!(self, Symbol::Dependent { .. })
    }

    pub fn is_barred(&self) -> bool {
        matches!(self, Symbol::Dependent { barred: true, .. })
    }

    /// The barred twin. Only dependent variables and their derivatives have one.
    pub fn barred(&self) -> Option<Symbol> {
        match *self {
            Symbol::Dependent {
                index,
                order,
                barred: false,
            } => Some(Symbol::Dependent {
                index,
                order,
                barred: true,
            }),
            _ => None,
        }
    }

    pub fn unbarred(&self) -> Symbol {
        match *self {
            Symbol::Dependent { index, order, .. } => Symbol::dependent(index, order),
            other => other,
        }
    }

    /// Image of the symbol under `d/dt`, as a symbol. Returns `Ok(None)` when
    /// the derivative is a constant (time and parameters).
    pub fn derivative(&self) -> Result<Option<Symbol>, AlgebraError> {
        match *self {
            Symbol::Time | Symbol::Parameter(_) => Ok(None),
            Symbol::Forcing { index, order } => Ok(Some(Symbol::forcing(index, order + 1))),
            Symbol::Dependent { barred: true, .. } => Err(AlgebraError::BarredOperand),
            Symbol::Dependent { index, order, .. } => Ok(Some(Symbol::dependent(index, order + 1))),
        }
    }

    fn sort_key(&self) -> (u8, u32, u32, u8) {
        match *self {
            Symbol::Time => (0, 0, 0, 0),
            Symbol::Parameter(i) => (1, i, 0, 0),
            Symbol::Forcing { index, order } => (2, index, order, 0),
            Symbol::Dependent { index, order, barred } => (3, index, order, if barred { 0 } else { 1 }),
        }
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Names of the declared parameters, forcing functions and dependent
/// variables. Indices inside [`Symbol`] refer to positions in these lists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolTable {
    parameters: Vec<String>,
    forcings: Vec<String>,
    dependents: Vec<String>,
    lookup: HashMap<String, Symbol>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `None` if the name is already taken (including `t`).
    pub fn add_parameter(&mut self, name: &str) -> Option<Symbol> {
        let sym = Symbol::Parameter(self.parameters.len() as u32);
        self.insert(name, sym)?;
        self.parameters.push(name.to_string());
        Some(sym)
    }

    pub fn add_forcing(&mut self, name: &str) -> Option<Symbol> {
        let sym = Symbol::forcing(self.forcings.len() as u32, 0);
        self.insert(name, sym)?;
        self.forcings.push(name.to_string());
        Some(sym)
    }

    pub fn add_dependent(&mut self, name: &str) -> Option<Symbol> {
        let sym = Symbol::dependent(self.dependents.len() as u32, 0);
        self.insert(name, sym)?;
        self.dependents.push(name.to_string());
        Some(sym)
    }

    fn insert(&mut self, name: &str, sym: Symbol) -> Option<()> {
        if name == "t" || name == "D" || self.lookup.contains_key(name) {
            return None;
        }
        self.lookup.insert(name.to_string(), sym);
        Some(())
    }

    /// Looks up a declared base symbol by name; `t` resolves to time.
    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        if name == "t" {
            return Some(Symbol::Time);
        }
        self.lookup.get(name).copied()
    }

    pub fn parameters(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.parameters.len() as u32).map(Symbol::Parameter)
    }

    pub fn forcings(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.forcings.len() as u32).map(|i| Symbol::forcing(i, 0))
    }

    pub fn dependents(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.dependents.len() as u32).map(|i| Symbol::dependent(i, 0))
    }

    /// Name of the base symbol, without derivative or bar decoration.
    pub fn base_name(&self, sym: &Symbol) -> &str {
        match *sym {
            Symbol::Time => "t",
            Symbol::Parameter(i) => &self.parameters[i as usize],
            Symbol::Forcing { index, .. } => &self.forcings[index as usize],
            Symbol::Dependent { index, .. } => &self.dependents[index as usize],
        }
    }

    /// Parseable display name: `y`, `y'`, `y''`, `y'''`, then `D(y,k)`.
    /// Barred symbols print as `bar(...)`, which is display-only.
    pub fn display(&self, sym: &Symbol) -> String {
        let base = self.base_name(sym);
        let order = sym.order();
        let plain = if order <= 3 {
            format!("{base}{}", "'".repeat(order as usize))
        } else {
            format!("D({base},{order})")
        };
        if sym.is_barred() {
            format!("bar({plain})")
        } else {
            plain
        }
    }
}

impl fmt::Display for SymbolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SymbolKind::Time => "time",
            SymbolKind::Dependent => "dependent",
            SymbolKind::Derivative => "derivative",
            SymbolKind::Parameter => "parameter",
            SymbolKind::Forcing => "forcing",
            SymbolKind::ForcingDerivative => "forcing-derivative",
            SymbolKind::Barred => "barred",
        };
        f.write_str(s)
    }
}
