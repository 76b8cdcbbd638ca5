use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("incompatible cyclotomic fields: order {left} vs order {right}")]
    IncompatibleField { left: u32, right: u32 },

    #[error("division by zero")]
    DivisionByZero,

    /// A coefficient past the truncation order was requested; its value is unknown.
    #[error("coefficient of z^({requested}) lies beyond the truncation order {available}")]
    Truncation { requested: String, available: String },

    #[error("window exceeded: {0}")]
    WindowExceeded(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("automorphism does not map relation {relation} into the span of the relations")]
    IdealNotPreserved { relation: usize },

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown identifier `{name}` at line {line}, column {column}")]
    UnknownIdentifier {
        name: String,
        line: usize,
        column: usize,
    },

    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
