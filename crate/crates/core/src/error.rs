use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error("cayley table rejected: {0}")]
    CayleyValidationFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("budget exceeded: cost {cost} > budget {budget}")]
    BudgetExceeded { cost: u128, budget: u64 },
    #[error("sigma is not an automorphism at this finite image: {0}")]
    SigmaInconsistent(String),
    #[error("invalid constraint: {0}")]
    InvalidConstraint(String),
    #[error("expected an integer, got {0}")]
    NonIntegerResult(String),
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("constant term must be {expected} for {op}")]
    BadConstantTerm { op: &'static str, expected: u8 },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("invalid character table: {0}")]
    InvalidTable(String),
    #[error("independent computations disagree: {0}")]
    OracleMismatch(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
