use thiserror::Error;

/// Failures of the algebra kernel and the Dixon machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("exact division left a nonzero remainder")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("operand mentions barred symbols")]
    BarredOperand,
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("{equations} equations cannot eliminate {symbols} symbols (need symbols + 1)")]
    CountMismatch { equations: usize, symbols: usize },
    #[error("elimination matrix is identically zero")]
    ZeroMatrix,
}
