use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse {0:?} as a rational (expected \"p\", \"p/q\" or a decimal)")]
    ParseRational(String),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("Sarrus' rule needs a 3x3 matrix, got {rows}x{cols}")]
    NotThreeByThree { rows: usize, cols: usize },
    #[error("expected a 2x2 matrix, got {rows}x{cols}")]
    NotTwoByTwo { rows: usize, cols: usize },
    #[error("{0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("matrix is singular: {0}")]
    SingularMatrix(String),
    #[error("method {method} is not applicable: {reason}{}", alternative.as_ref().map(|a| format!(" (use {a} instead)")).unwrap_or_default())]
    MethodInapplicable {
        method: String,
        reason: String,
        alternative: Option<String>,
    },
    #[error("dimension {dimension} exceeds the cap of {cap}")]
    DimensionCapExceeded { dimension: usize, cap: usize },
    #[error("trace has no steps")]
    EmptyTrace,
    #[error("traces belong to different tasks")]
    TaskMismatch,
    #[error("traces were computed from different inputs")]
    InputMismatch,
    #[error("unknown method {0:?}")]
    UnknownMethod(String),
    #[error("method {method:?} does not solve task {task}")]
    MethodTaskMismatch { method: String, task: String },
    #[error("unknown task {0:?}")]
    UnknownTask(String),
    #[error("missing input {0:?}")]
    MissingInput(String),
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
}

impl Error {
    /// Stable identifier used in CLI messages and service error bodies.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ZeroDenominator => "ZeroDenominator",
            Error::DivisionByZero => "DivisionByZero",
            Error::ParseRational(_) => "ParseRational",
            Error::InvalidMatrix(_) => "InvalidMatrix",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NotSquare { .. } => "NotSquare",
            Error::NotThreeByThree { .. } => "NotThreeByThree",
            Error::NotTwoByTwo { .. } => "NotTwoByTwo",
            Error::NotPowerOfTwo(_) => "NotPowerOfTwo",
            Error::SingularMatrix(_) => "SingularMatrix",
            Error::MethodInapplicable { .. } => "MethodInapplicable",
            Error::DimensionCapExceeded { .. } => "DimensionCapExceeded",
            Error::EmptyTrace => "EmptyTrace",
            Error::TaskMismatch => "TaskMismatch",
            Error::InputMismatch => "InputMismatch",
            Error::UnknownMethod(_) => "UnknownMethod",
            Error::MethodTaskMismatch { .. } => "MethodTaskMismatch",
            Error::UnknownTask(_) => "UnknownTask",
            Error::MissingInput(_) => "MissingInput",
            Error::ConfigInvalid(_) => "ConfigInvalid",
        }
    }
}
