use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not a point of the open unit disc")]
    InvalidPoint(String),

    #[error("{0} is not unimodular")]
    NotUnimodular(String),

    #[error("two-point Pick problem has no solution")]
    NotSolvable,

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("parameters map both poles to the same point")]
    DiagonalOutput,

    #[error("the two poles coincide")]
    DiagonalPoles,

    #[error("a pole coincides with the base point")]
    PoleAtBase,

    #[error("no convergence after {starts} starts")]
    NoConvergence { starts: usize },

    #[error("kernel of I - P conj(P) is trivial at this value of l")]
    NoCandidate,

    #[error("no interpolating disc met the residual gate")]
    NoFeasibleDisc,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable machine-readable tag, used by the CLI and the C ABI.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::InvalidPoint(_) => "INVALID_POINT",
            Error::NotUnimodular(_) => "NOT_UNIMODULAR",
            Error::NotSolvable => "NOT_SOLVABLE",
            Error::Degenerate(_) => "DEGENERATE",
            Error::DiagonalOutput => "DIAGONAL_OUTPUT",
            Error::DiagonalPoles => "DIAGONAL_POLES",
            Error::PoleAtBase => "POLE_AT_BASE",
            Error::NoConvergence { .. } => "NO_CONVERGENCE",
            Error::NoCandidate => "NO_CANDIDATE",
            Error::NoFeasibleDisc => "NO_FEASIBLE_DISC",
            Error::InvalidArgument(_) => "INVALID_ARGUMENT",
        }
    }
}
