use thiserror::Error;

/// Coarse classification used by callers that map failures onto exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed input or a violated precondition.
    Input,
    /// A configured enumeration or basis budget was exhausted.
    Budget,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field_tower: {0} is not prime")]
    NotPrime(u64),
    #[error("field_tower: extension degree must be at least 1")]
    ZeroDegree,
    #[error("field_tower: zero has no inverse")]
    ZeroInverse,
    #[error("field_tower: operands belong to different fields")]
    FieldMismatch,
    #[error("field_tower: zero polynomial")]
    ZeroPolynomial,
    #[error("field_tower: polynomial must have degree at least 1")]
    ConstantPolynomial,

    #[error("quandle: {0}")]
    Quandle(String),
    #[error("quandle: violated axiom {axiom} at {at:?}")]
    Axiom { axiom: &'static str, at: Vec<usize> },
    #[error("quandle: function is not central ({0})")]
    NotCentral(String),
    #[error("quandle: structure mismatch")]
    StructureMismatch,

    #[error("diffpoly: syntax error at column {column}: {msg}")]
    Syntax { column: usize, msg: String },
    #[error("diffpoly: unknown variable {0}")]
    UnknownVariable(String),
    #[error("diffpoly: {0}")]
    Poly(String),

    #[error("{module}: {msg}")]
    Invalid { module: &'static str, msg: String },
    #[error("{module}: budget exceeded: {msg}")]
    Budget { module: &'static str, msg: String },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Budget { .. } => ErrorKind::Budget,
            _ => ErrorKind::Input,
        }
    }

    pub(crate) fn invalid(module: &'static str, msg: impl Into<String>) -> Self {
        Error::Invalid {
            module,
            msg: msg.into(),
        }
    }

    pub(crate) fn budget(module: &'static str, msg: impl Into<String>) -> Self {
        Error::Budget {
            module,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
