use thiserror::Error;

/// Failures that are not axiom violations: malformed input, out-of-range
/// indices and exhausted search budgets.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OdpError {
    #[error("structural: {0}")]
    Structure(String),
    #[error("index {index} out of range for {size} elements")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("size mismatch: poset has {poset} elements, delta table has {delta}")]
    SizeMismatch { poset: usize, delta: usize },
    #[error("{size} elements exceeds the element cap {cap} (raise --max-elements to override)")]
    TooLarge { size: usize, cap: usize },
    #[error("search budget of {budget} nodes exceeded; result incomplete")]
    BudgetExceeded { budget: u64 },
    #[error("fragment too large: {reason}")]
    FragmentTooLarge { reason: String },
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl OdpError {
    pub(crate) fn structure(msg: impl Into<String>) -> Self {
        OdpError::Structure(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        OdpError::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, OdpError>;
