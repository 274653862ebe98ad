//! Index reduction and differential-algebraic Dixon elimination for
//! polynomial DAE systems.
//!
//! The crate is layered bottom-up:
//!
//! - [`symbol`], [`monomial`], [`poly`], [`gcd`], [`matrix`]: the exact algebra
//!   kernel (rationals, sparse polynomials, total derivative, GCD, Bareiss).
//! - [`dsl`]: the `.dae` text format and polynomial rendering.
//! - [`reduction`]: variable pencil and the differentiation loop that decides
//!   how often each equation must be differentiated.
//! - [`dixon`]: cancellation matrix, Dixon polynomial, elimination matrix and
//!   projection operator.
//! - [`elim`]: the end-to-end pipeline producing a single ODE in one kept
//!   dependent variable.

pub mod dixon;
pub mod dsl;
pub mod elim;
pub mod error;
pub mod gcd;
pub mod matrix;
pub mod monomial;
pub mod poly;
pub mod rational;
pub mod reduction;
pub mod symbol;

pub use error::AlgebraError;
pub use gcd::multivariate_gcd;
pub use matrix::PolyMatrix;
pub use monomial::Monomial;
pub use poly::Polynomial;
pub use rational::Rational;
pub use symbol::{Symbol, SymbolKind, SymbolTable};
