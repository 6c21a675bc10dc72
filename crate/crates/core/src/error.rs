use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Two inputs that must share a length do not.
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// Input outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// An index does not address an existing entry.
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    /// The modulus of a field is not prime.
    #[error("modulus {0} is not prime")]
    NotPrime(u64),

    /// Matrix has no inverse over the field.
    #[error("matrix is singular over F_{0}")]
    Singular(u64),

    /// A received vector is not a point of the expected lattice or code.
    #[error("corrupted input: {0}")]
    Corruption(String),

    /// Enumeration or search would exceed its configured budget.
    #[error("budget exceeded: {what} needs more than {limit}")]
    Budget { what: &'static str, limit: u128 },

    /// Configuration rejected at validation.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// True for errors caused by exhausting a resource budget.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}
