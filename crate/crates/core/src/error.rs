use thiserror::Error;

/// Errors raised by the algebra, transform and estimation layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Operands belong to different algebras or have mismatched block shapes.
    #[error("structural mismatch: {0}")]
    Structural(String),
    /// A precondition on the inputs does not hold.
    #[error("contract violation: {0}")]
    Contract(String),
    /// A numerical routine failed on the given block.
    #[error("numerical failure in block {block}: {msg}")]
    Numerical { block: usize, msg: String },
    /// An input is zero where a nonzero one is required.
    #[error("degenerate input: {0}")]
    Degenerate(String),
    /// Malformed text input (group files, operator specs).
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
