use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("fractional order {0} outside the open interval (0, 1)")]
    InvalidOrder(f64),

    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not symmetric positive definite (pivot {pivot:e} at row {row})")]
    NotSpd { row: usize, pivot: f64 },

    #[error("non-finite value encountered in {context}")]
    NonFinite { context: String },

    #[error("requested accuracy not achieved: {0}")]
    AccuracyNotAchieved(String),

    #[error("solution diverged at step {step} (t = {t})")]
    Diverged { step: usize, t: f64 },

    #[error("state left the admissible band |u| <= {bound} at step {step}")]
    StateOutOfBand { step: usize, bound: f64 },

    #[error("{steps} time steps exceed the cap of {cap}; use a larger alpha or a coarser target")]
    StepCap { steps: usize, cap: usize },

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("problem `{0}` has no manufactured exact solution")]
    NoExactSolution(String),

    #[error("meshes are not nested: {coarse} and {fine} elements")]
    NotNested { coarse: usize, fine: usize },

    #[error("cannot fit power law: {0}")]
    Fit(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidArgument {
        name,
        reason: reason.into(),
    }
}
