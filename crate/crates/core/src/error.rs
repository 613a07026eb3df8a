use alloc::string::String;
use core::fmt;

/// Errors raised by constructors, checkers and searches.
///
/// Failed checks are not errors: they come back as a failing
/// [`Verdict`](crate::Verdict) carrying a witness. Errors are reserved for
/// inputs a check cannot be run on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    NotPrime(u64),
    /// Two operands live over different moduli.
    ModulusMismatch {
        left: u32,
        right: u32,
    },
    /// Two operands live in different groups `Z_p^d`.
    ParamsMismatch,
    /// `p^d` exceeds the configured enumeration cap.
    TooLarge {
        size: u128,
        cap: usize,
    },
    /// Input outside the domain of an operation (wrong dimension, p = 2, ...).
    Domain(String),
    /// A documented precondition of a checker does not hold.
    Precondition(String),
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(n) => write!(f, "{n} is not prime"),
            Error::ModulusMismatch { left, right } => {
                write!(f, "modulus mismatch: {left} vs {right}")
            }
            Error::ParamsMismatch => f.write_str("operands belong to different groups"),
            Error::TooLarge { size, cap } => {
                write!(f, "group size {size} exceeds the cap of {cap} points")
            }
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "not_prime",
            Error::ModulusMismatch { .. } => "modulus_mismatch",
            Error::ParamsMismatch => "params_mismatch",
            Error::TooLarge { .. } => "too_large",
            Error::Domain(_) => "domain",
            Error::Precondition(_) => "precondition",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
