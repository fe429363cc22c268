//! Error type shared by the whole crate.
//!
//! Two failure classes matter to callers:
//!
//! * [`Error::Domain`] — the caller handed us something outside a
//!   documented precondition (zero divisor, non-monic level, mismatched
//!   lengths, …).  These are ordinary, recoverable errors.
//! * [`Error::Inconsistency`] — an internal identity that the theory
//!   guarantees has failed (a closed form disagreed with its defining
//!   ratio, an exact division left a remainder).  These indicate a bug in
//!   a transcribed formula and are never the caller's fault; they should
//!   be treated as fatal.
//!
//! Text-format problems get their own class ([`Error::Parse`]) so a CLI
//! can map them to a usage error instead of a domain error.

use alloc::string::String;
use core::fmt;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A documented precondition was violated by the caller.
    Domain(String),
    /// An internal consistency check failed; indicates a defect in the
    /// crate itself, not in the input.
    Inconsistency(String),
    /// A string did not parse as a polynomial / element / vector.
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn inconsistency(msg: impl Into<String>) -> Self {
        Error::Inconsistency(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Inconsistency(msg) => write!(f, "internal consistency error: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
