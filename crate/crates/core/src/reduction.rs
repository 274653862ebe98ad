//! Structural index reduction with the variable pencil.
//!
//! The enlarged system is grown one differentiation at a time until the
//! number of equations is one more than the number of dependent-variable
//! symbols that still have to be eliminated.

use std::collections::BTreeSet;
use std::fmt::Write;

use thiserror::Error;

use crate::dsl::{DaeSystem, Equation};
use crate::error::AlgebraError;
use crate::symbol::{Symbol, SymbolTable};

/// 0/1 incidence of dependent-variable symbols in equations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariablePencil {
    pub row_labels: Vec<String>,
    /// Strictly increasing in the global symbol order.
    pub col_labels: Vec<Symbol>,
    pub bits: Vec<Vec<bool>>,
}

impl VariablePencil {
    pub fn build(equations: &[Equation]) -> Self {
        let cols: BTreeSet<Symbol> = equations
            .iter()
            .flat_map(|e| e.poly.symbols())
            .filter(Symbol::is_dependent)
            .collect();
        let col_labels: Vec<Symbol> = cols.into_iter().collect();
        let bits = equations
            .iter()
            .map(|e| {
                let syms = e.poly.symbols();
                col_labels.iter().map(|c| syms.contains(c)).collect()
            })
            .collect();
        VariablePencil {
            row_labels: equations.iter().map(Equation::label).collect(),
            col_labels,
            bits,
        }
    }

    pub fn rows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn render(&self, table: &SymbolTable) -> String {
        let names: Vec<String> = self.col_labels.iter().map(|s| table.display(s)).collect();
        let label_width = self.row_labels.iter().map(String::len).max().unwrap_or(0);
        let widths: Vec<usize> = names.iter().map(|n| n.len().max(1)).collect();
        let mut out = format!("{:label_width$}", "");
        for (n, w) in names.iter().zip(&widths) {
            let _ = write!(out, "  {n:>w$}");
        }
        out.push('\n');
        for (label, row) in self.row_labels.iter().zip(&self.bits) {
            let _ = write!(out, "{label:label_width$}");
            for (b, w) in row.iter().zip(&widths) {
                let _ = write!(out, "  {:>w$}", u8::from(*b));
            }
            out.push('\n');
        }
        out
    }
}

/// Convenience wrapper over [`VariablePencil::build`] for an input system.
pub fn build_variable_pencil(sys: &DaeSystem) -> VariablePencil {
    VariablePencil::build(&sys.equations)
}

/// Splits equation indices into differential (`F_o`) and algebraic (`F_a`)
/// sets: an equation is differential iff some derivative of a dependent
/// variable occurs in it.
pub fn classify_equations(sys: &DaeSystem) -> (Vec<usize>, Vec<usize>) {
    sys.equations
        .iter()
        .enumerate()
        .map(|(i, e)| (i, is_differential(e)))
        .fold((Vec::new(), Vec::new()), |(mut fo, mut fa), (i, d)| {
            if d {
                fo.push(i);
            } else {
                fa.push(i);
            }
            (fo, fa)
        })
}

fn is_differential(eq: &Equation) -> bool {
    eq.poly.mentions(|s| s.is_dependent() && s.order() > 0)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionConfig {
    /// Total differentiation budget. `None` means `n * (max r_j + 2)`.
    pub max_differentiations: Option<usize>,
}

/// Which termination condition ended the loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// The input already had the right shape.
    Initial,
    /// Reached by differentiating algebraic constraints only.
    Algebraic,
    /// Reached after also differentiating differential equations.
    Differential,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionResult {
    pub target: Option<Symbol>,
    /// Original equations and their derivatives, grouped by origin and
    /// ordered by derivative count.
    pub enlarged: Vec<Equation>,
    pub upsilon: Vec<u32>,
    pub weak_index: u32,
    pub initial_pencil: VariablePencil,
    pub pencil: VariablePencil,
    /// Every symbol of the target variable occurring in the enlarged system.
    pub kept_family: Vec<Symbol>,
    /// Dependent-variable symbols that are determined on their own by a single
    /// equation (for example `y5 = e(t)`). They are neither counted nor
    /// eliminated.
    pub known: Vec<Symbol>,
    /// Symbols to eliminate, ascending.
    pub elimination: Vec<Symbol>,
    pub termination: Option<Termination>,
}

impl ReductionResult {
    /// Equations minus (elimination symbols + 1); zero on success.
    pub fn balance(&self) -> isize {
        self.enlarged.len() as isize - self.elimination.len() as isize - 1
    }

    /// The enlarged system as a standalone [`DaeSystem`].
    pub fn enlarged_system(&self, sys: &DaeSystem) -> DaeSystem {
        DaeSystem {
            name: sys.name.clone(),
            table: sys.table.clone(),
            equations: self.enlarged.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("`{0}` is not a declared dependent variable")]
    UnknownTarget(String),
    #[error("no differentiation schedule balances the system: {reason}")]
    NotReducible {
        reason: String,
        partial: Box<ReductionResult>,
    },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Splits the dependent symbols of `equations` into kept family, known
/// symbols and elimination symbols for the given target.
pub fn partition_symbols(equations: &[Equation], target: Option<Symbol>) -> (Vec<Symbol>, Vec<Symbol>, Vec<Symbol>) {
    let in_family = |s: &Symbol| target.is_some_and(|t| s.dependent_index() == t.dependent_index());
    let mut all = BTreeSet::new();
    let mut known = BTreeSet::new();
    for eq in equations {
        let deps: Vec<Symbol> = eq.poly.symbols().into_iter().filter(Symbol::is_dependent).collect();
        if let [only] = deps[..] {
            if !in_family(&only) {
                known.insert(only);
            }
        }
        all.extend(deps);
    }
    let kept = all.iter().copied().filter(in_family).collect();
    let elimination = all
        .iter()
        .copied()
        .filter(|s| !in_family(s) && !known.contains(s))
        .collect();
    (kept, known.into_iter().collect(), elimination)
}

/// True when the equations are exactly one more than the symbols to eliminate.
pub fn is_balanced(equations: &[Equation], target: Option<Symbol>) -> bool {
    equations.len() == partition_symbols(equations, target).2.len() + 1
}

struct State {
    /// Per original equation, the chain `f, δf, δ²f, ...`.
    chains: Vec<Vec<Equation>>,
    target: Option<Symbol>,
    differentiations: usize,
    budget: usize,
}

impl State {
    fn equations(&self) -> Vec<Equation> {
        self.chains.iter().flatten().cloned().collect()
    }

    fn balanced(&self) -> bool {
        is_balanced(&self.equations(), self.target)
    }

    fn top(&self, k: usize) -> &Equation {
        self.chains[k].last().expect("chains are never empty")
    }

    /// Next derivative of equation `k`, if it is nonzero.
    fn next_derivative(&self, k: usize) -> Result<Option<Equation>, AlgebraError> {
        let top = self.top(k);
        let poly = top.poly.total_derivative()?;
        Ok((!poly.is_zero()).then(|| Equation {
            origin: k,
            derivative: top.derivative + 1,
            poly,
        }))
    }

    fn push(&mut self, eq: Equation) {
        self.differentiations += 1;
        self.chains[eq.origin].push(eq);
    }

    fn exhausted(&self) -> bool {
        self.differentiations >= self.budget
    }

    /// Elimination symbols `eq` would add to the current system.
    fn new_elimination_symbols(&self, eq: &Equation) -> usize {
        let present: BTreeSet<Symbol> = self.chains.iter().flatten().flat_map(|e| e.poly.symbols()).collect();
        eq.poly
            .symbols()
            .into_iter()
            .filter(|s| s.is_dependent() && !present.contains(s))
            .filter(|s| self.target.is_none_or(|t| s.dependent_index() != t.dependent_index()))
            .count()
    }

    fn finish(&self, sys: &DaeSystem, termination: Option<Termination>) -> ReductionResult {
        let enlarged = self.equations();
        let upsilon: Vec<u32> = self.chains.iter().map(|c| c.len() as u32 - 1).collect();
        let (kept_family, known, elimination) = partition_symbols(&enlarged, self.target);
        ReductionResult {
            target: self.target,
            weak_index: upsilon.iter().copied().max().unwrap_or(0),
            upsilon,
            initial_pencil: build_variable_pencil(sys),
            pencil: VariablePencil::build(&enlarged),
            kept_family,
            known,
            elimination,
            enlarged,
            termination,
        }
    }
}

/// Differentiates equations of `sys` until the system is balanced with
/// respect to `target` (or with nothing kept, when `target` is `None`).
///
/// Algebraic constraints are differentiated first, round-robin in
/// declaration order, as long as no dependent variable exceeds its original
/// maximum order. If that does not balance the system, differential
/// equations of order at most `max r_j` are differentiated, each time
/// choosing the one that introduces the fewest new symbols to eliminate.
pub fn reduce_index(
    sys: &DaeSystem,
    target: Option<Symbol>,
    config: &ReductionConfig,
) -> Result<ReductionResult, ReductionError> {
    if let Some(t) = target {
        if !t.is_dependent() || t.is_barred() || t.order() != 0 {
            return Err(ReductionError::UnknownTarget(format!("{t:?}")));
        }
    }
    let orders = sys.max_orders();
    let max_order = orders.iter().copied().max().unwrap_or(0);
    let n = sys.equations.len();
    let mut state = State {
        chains: sys.equations.iter().map(|e| vec![e.clone()]).collect(),
        target,
        differentiations: 0,
        budget: config.max_differentiations.unwrap_or(n * (max_order as usize + 2)),
    };
    if state.balanced() {
        return Ok(state.finish(sys, Some(Termination::Initial)));
    }

    let within_orders = |eq: &Equation| {
        eq.poly.symbols().iter().all(|s| match s.dependent_index() {
            Some(j) => s.order() <= orders[j as usize],
            None => true,
        })
    };
    let (_, algebraic) = classify_equations(sys);
    let mut open = algebraic;
    while !open.is_empty() {
        let mut still_open = Vec::new();
        for k in open {
            if state.exhausted() {
                return Err(not_reducible(&state, sys, "differentiation budget exhausted"));
            }
            let Some(eq) = state.next_derivative(k)? else {
                continue;
            };
            if !within_orders(&eq) {
                continue;
            }
            state.push(eq);
            if state.balanced() {
                return Ok(state.finish(sys, Some(Termination::Algebraic)));
            }
            still_open.push(k);
        }
        open = still_open;
    }

    loop {
        if state.exhausted() {
            return Err(not_reducible(&state, sys, "differentiation budget exhausted"));
        }
        let mut best: Option<((usize, u32, usize), Equation)> = None;
        for k in 0..n {
            let top = state.top(k);
            if !is_differential(top) || top.order() > max_order {
                continue;
            }
            let Some(eq) = state.next_derivative(k)? else {
                continue;
            };
            let key = (state.new_elimination_symbols(&eq), top.order(), k);
            if best.as_ref().is_none_or(|(b, _)| key < *b) {
                best = Some((key, eq));
            }
        }
        let Some((_, eq)) = best else {
            return Err(not_reducible(&state, sys, "no equation can be differentiated further"));
        };
        state.push(eq);
        if state.balanced() {
            return Ok(state.finish(sys, Some(Termination::Differential)));
        }
    }
}

fn not_reducible(state: &State, sys: &DaeSystem, reason: &str) -> ReductionError {
    ReductionError::NotReducible {
        reason: reason.to_string(),
        partial: Box::new(state.finish(sys, None)),
    }
}
