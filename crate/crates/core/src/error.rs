use thiserror::Error;

/// Errors raised by the library. Every variant maps onto one CLI exit code
/// through [`Error::exit_code`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty support")]
    EmptySupport,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("cap exceeded: {cap} = {limit}, input needs {requested}")]
    CapExceeded {
        cap: &'static str,
        limit: u64,
        requested: u64,
    },

    #[error("support has {size} atoms, above the explicit-materialization cap of {cap}; use the implicit product-measure engines in `commute` instead")]
    SupportTooLarge { size: usize, cap: usize },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("zero is not allowed in this set")]
    ZeroInSet,

    #[error("dyadic levels require set profiles (integer masses)")]
    NonIntegerProfile,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
}

impl Error {
    pub fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidArgument(message.into())
    }

    /// 2 for usage errors, 3 for cap violations.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CapExceeded { .. } | Error::SupportTooLarge { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
