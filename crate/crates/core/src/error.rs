use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("value {0} lies outside [0, 1]")]
    OutOfRange(String),

    #[error("policy mismatch: {0}")]
    PolicyMismatch(String),

    #[error("t-norm `{tnorm}` is not closed on the grid of resolution {n}")]
    GridClosure { tnorm: String, n: u32 },

    #[error("no s in [0, 1] satisfies {t} <= s * {l}")]
    NoSolution { t: String, l: String },

    #[error("bisection did not converge: residual {residual:e}")]
    NonConvergence { residual: f64 },

    #[error("invalid t-norm table: {0}")]
    Table(String),

    #[error("space must have between 1 and {max} distinct points: {reason}")]
    Space { max: usize, reason: String },

    #[error("objects live on different spaces")]
    SpaceMismatch,

    #[error("capacity is not normalized: {0}")]
    Normalization(String),

    #[error("capacity is not monotone: value at {smaller} is {lo} but at its superset {larger} is {hi}")]
    NotMonotone {
        smaller: String,
        larger: String,
        lo: String,
        hi: String,
    },

    #[error("{0}")]
    Invalid(String),

    #[error("point set is not on the grid of resolution {0}")]
    NotOnGrid(u32),

    #[error("the set A is not contained in the ambient set K")]
    NotSubset,

    #[error("enumeration bound exceeded: {0}")]
    ResourceBound(String),

    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: {message}")]
    Semantic { path: String, message: String },

    #[error("{0}")]
    Usage(String),
}
