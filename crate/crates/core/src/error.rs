use crate::formula::Var;
use crate::ntm::Violation;
use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable {0} is not in the interpretation's domain")]
    UndefinedVariable(Var),
    #[error("domain mismatch: expected {expected}, found {found}")]
    DomainMismatch { expected: String, found: String },
    #[error("clause contains both {0} and its complement")]
    TautologicalClause(Var),
    #[error("literal over {var} exceeds declared variable count {num_vars}")]
    VarOutOfRange { var: Var, num_vars: u32 },
    #[error("bound variable {0} does not occur in the matrix")]
    BoundVarAbsent(Var),
    #[error("variable {0} occurs twice in the quantifier prefix")]
    DuplicateQuantifier(Var),
    #[error("variable {0} is not quantified")]
    NotClosed(Var),
    #[error("resource limit exceeded: {what} is {actual}, cap is {limit}")]
    ResourceLimit {
        what: &'static str,
        limit: usize,
        actual: usize,
    },
    #[error("malformed theory: {0}")]
    MalformedTheory(String),
    #[error("program is not negation-free")]
    NotPositive,
    #[error("invalid machine specification: {0:?}")]
    InvalidSpec(Vec<Violation>),
    #[error("configuration is in a halting state")]
    HaltedConfiguration,
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("symbol {0:?} is not allowed here")]
    InvalidSymbol(char),
    #[error("machine is not deterministic")]
    NotDeterministic,
    #[error("witness is not accepted by the machine")]
    NotAccepted,
    #[error("witness cell {column} holds {count} symbols")]
    AmbiguousCell { column: usize, count: usize },
    #[error("gadget size {0} is below the minimum of 3")]
    TooSmall(usize),
    #[error("clause {0} is not a 3-clause over the base variables")]
    ClauseNotInPi(String),
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("header declares {declared} clauses, found {found}")]
    HeaderMismatch { declared: usize, found: usize },
    #[error("external solver failed: {0}")]
    ExternalSolver(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn limit(what: &'static str, limit: usize, actual: usize) -> Self {
        Error::ResourceLimit {
            what,
            limit,
            actual,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
