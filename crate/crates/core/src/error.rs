use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Parse failure in one of the line-oriented instance formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: missing problem header")]
    MissingHeader { line: usize },
    #[error("line {line}: malformed header")]
    MalformedHeader { line: usize },
    #[error("line {line}: variable index {var} out of range (1..={max})")]
    VariableOutOfRange { line: usize, var: i64, max: u32 },
    #[error("line {line}: missing terminating 0")]
    MissingTerminator { line: usize },
    #[error("line {line}: invalid token `{token}`")]
    InvalidToken { line: usize, token: String },
    #[error("line {line}: empty clause")]
    EmptyClause { line: usize },
    #[error("line {line}: expected {expected} clauses, found {found}")]
    ClauseCount {
        line: usize,
        expected: usize,
        found: usize,
    },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("incomplete assignment: variable {0} has no value")]
    IncompleteAssignment(u32),
    #[error("unknown variable {0}")]
    UnknownVariable(u32),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("instance too large: {what} needs {needed} enumeration steps, limit is {limit}")]
    TooLarge {
        what: &'static str,
        needed: u128,
        limit: u128,
    },
    #[error("construction precondition violated: {0}")]
    Precondition(String),
    #[error("map inconsistent with instance: {0}")]
    InconsistentMap(String),
    #[error("structure precondition unmet: {0}; use check_feasibility_sampled instead")]
    Structure(String),
    #[error("arithmetic overflow while scaling costs")]
    Overflow,
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInstance(msg.into())
    }
}
