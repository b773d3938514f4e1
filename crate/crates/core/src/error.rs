use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid scenario: {0}")]
    Invalid(String),

    #[error("unknown built-in model `{0}`")]
    UnknownModel(String),

    #[error("operation not available for parametric scenarios")]
    NotEvaluable,

    #[error("point {0} is not inside the open unit disk")]
    OutsideDisk(String),

    #[error("evaluation failed: {0}")]
    Evaluation(String),

    #[error("inversion failure (best residual {residual:.3e})")]
    InversionFailure { residual: f64 },

    #[error("target point lies outside the model domain")]
    OutsideOmega,

    #[error("backward orbit leaves the model domain")]
    PetalExit,

    #[error("orbit reached the floating-point resolution limit of the boundary")]
    BoundaryPrecision,

    #[error("model inconsistency at fixed point {index}: declared {declared}, numeric {numeric}")]
    ModelInconsistency {
        index: usize,
        declared: f64,
        numeric: f64,
    },

    #[error("no boundary limit at fixed point {0}")]
    NoBoundaryLimit(usize),

    #[error("outside the classified cases: {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("divergent orbit integral: {0}")]
    DivergentOrbitIntegral(String),

    #[error("tolerance failure: achieved tail bound {achieved:.3e}")]
    ToleranceFailure { achieved: f64 },

    #[error("linear algebra failure: {0}")]
    LinearAlgebra(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Syntax { .. } | Error::Invalid(_) | Error::UnknownModel(_) | Error::Io(_) => 2,
            Error::Unsupported(_) => 3,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
