use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The growth hypothesis `n > 2A` (or another stated precondition) is violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("syntax error at offset {offset}: expected {expected}")]
    Syntax { offset: usize, expected: String },

    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    /// Evaluation of an expression left the domain of one of its nodes.
    #[error("evaluation error in `{node}`: {reason}")]
    Eval { node: String, reason: String },

    #[error("expected {expected} derivative values, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("`{0}` is not differentiable")]
    NotDifferentiable(String),

    #[error("quadrature did not converge after {panels} panels (estimated error {estimate:e}, target {target:e})")]
    Quadrature {
        panels: usize,
        estimate: f64,
        target: f64,
    },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Precondition(_) => "precondition",
            Error::Syntax { .. } => "syntax",
            Error::UnknownIdentifier { .. } => "unknown_identifier",
            Error::Eval { .. } => "eval",
            Error::Arity { .. } => "arity",
            Error::NotDifferentiable(_) => "not_differentiable",
            Error::Quadrature { .. } => "quadrature",
            Error::DegenerateFit(_) => "degenerate_fit",
        }
    }
}
