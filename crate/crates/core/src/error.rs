use thiserror::Error;

/// Errors raised by the algebra, enumeration and rewriting routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HallError {
    #[error("{0} is not a prime; the ground field must be F_q with q prime")]
    NotPrime(u64),

    #[error("coefficients built over different ground fields (q={left} and q={right})")]
    GroundMismatch { left: u32, right: u32 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("product {left} . {right} is not determined by the known Hall relations")]
    NotDerivable { left: String, right: String },

    #[error("enumeration budget exceeded: {what} needs {needed}, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("non-integral Hall number {value} for {context}")]
    NonIntegral { context: String, value: String },

    #[error("unsupported argument: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("malformed JSON: {0}")]
    Json(String),
}

pub type Result<T, E = HallError> = std::result::Result<T, E>;
