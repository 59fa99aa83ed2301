use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("incomplete assignment: variable x{0} is unbound")]
    IncompleteAssignment(usize),

    #[error("use evaluate: the partial assignment binds every variable")]
    UseEvaluate,

    #[error("instance too large: n = {n} exceeds the {what} cap of {cap}")]
    InstanceTooLarge { what: &'static str, n: usize, cap: usize },

    #[error("variable x{var} out of range for n = {n}")]
    VariableOutOfRange { var: usize, n: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("inconsistent adversary: {0}")]
    InconsistentAdversary(String),

    #[error("constant function: {0}")]
    Constant(&'static str),

    #[error("function is not monotone")]
    NotMonotone,

    #[error("function is not quadratic: minterm of size {0}")]
    NotQuadratic(usize),

    #[error("x{0} is not a variable of the certificate")]
    NotInCertificate(usize),

    #[error("no maxterm crosses the minterm exactly at x{0}")]
    NoCrossingCertificate(usize),

    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),

    #[error("{0} is not the f* function it was constructed for")]
    AlgorithmMismatch(String),

    #[error("empty cost family")]
    EmptyFamily,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, column, message: message.into() }
    }
}
