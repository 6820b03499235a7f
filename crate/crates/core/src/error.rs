use alloc::string::String;
use core::fmt;

/// Errors reported by the numerical core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside its admissible range. `name` is the field the
    /// caller supplied, so front ends can echo it back.
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    /// A merchant configuration marked more than one stack as false.
    MoreThanOneFalseStack,
    /// A weight that does not decode to a merchant configuration.
    UndecodableWeight(f64),
    /// A 1-based index past the end of a sequence.
    IndexOutOfRange { index: usize, len: usize },
    /// Two operands of incompatible size.
    LengthMismatch { expected: usize, found: usize },
    /// A Turing machine definition violated its invariants.
    MalformedMachine(String),
    /// A request that the implementation deliberately does not serve.
    Unsupported(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: &'static str) -> Self {
        Error::InvalidParameter { name, reason }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { name, reason } => {
                write!(f, "invalid value for `{name}`: {reason}")
            }
            Error::MoreThanOneFalseStack => f.write_str("at most one stack may hold false coins"),
            Error::UndecodableWeight(w) => write!(f, "weight {w} g matches no stack configuration"),
            Error::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range for length {len}")
            }
            Error::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            Error::MalformedMachine(msg) => write!(f, "malformed machine: {msg}"),
            Error::Unsupported(what) => write!(f, "unsupported: {what}"),
        }
    }
}

impl core::error::Error for Error {}
