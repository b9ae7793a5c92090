use thiserror::Error;

/// Errors produced by the identifiability toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed input: vertex out of range, self-loop, bad document, ...
    #[error("invalid input: {0}")]
    Input(String),

    /// A documented precondition of an operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("division by the zero rational function")]
    DivisionByZero,

    #[error("matrix is singular over the rational-function field")]
    Singular,

    #[error("matrix dimensions do not match: {0}")]
    Dimension(String),

    /// Constrained-path enumeration would visit more endpoint pairs than allowed.
    #[error("enumeration budget exceeded: {required} endpoint pairs > budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    /// The network matrix violates one of the admissibility properties.
    #[error("network matrix is not admissible: {0}")]
    NotAdmissible(String),

    /// Counterexample synthesis ran out of resamples.
    #[error("counterexample construction failed after {attempts} attempts: {diagnostics}")]
    ConstructionFailed { attempts: usize, diagnostics: String },

    /// A result failed its own post-condition audit. Always a bug.
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
