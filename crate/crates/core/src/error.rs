use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Shape mismatch, non-finite entries, empty input, or a violated precondition.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// The eigenvector matrix of the adjoint is rank deficient; use the Jordan path.
    #[error("matrix is not diagonalizable: eigenvalue {eigenvalue} has geometric multiplicity {geometric} < algebraic multiplicity {algebraic}")]
    NotDiagonalizable {
        eigenvalue: String,
        geometric: usize,
        algebraic: usize,
    },

    #[error("invalid sampling scheme: {0}")]
    InvalidScheme(String),

    #[error("invalid Jordan layout: {0}")]
    InvalidJordanLayout(String),

    #[error("search space too large: dimension {dimension} exceeds exhaustive limit {limit}")]
    SearchSpaceTooLarge { dimension: usize, limit: usize },

    /// Even the full site set fails the spanning test.
    #[error("no feasible sampling set exists for this factorization")]
    Infeasible,

    #[error("search exhausted without finding a solution: {0}")]
    NotFound(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::DegenerateInput(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
