use alloc::string::String;
use core::fmt;

/// Error taxonomy shared by the whole crate.
///
/// `Validation` is "your input is malformed" (bad graph, ids that don't
/// match, ...), `Domain` is "the input is well-formed but outside what the
/// theory covers" (g < 2, unsupported stack tag at genus 2, ...), and
/// `Internal` flags a broken invariant: a quantity the theory promises to be
/// an integer came out fractional, etc. Internal errors are bugs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    Validation(String),
    Domain(String),
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Validation(m) => write!(f, "validation error: {m}"),
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Internal(m) => write!(f, "internal invariant violated: {m}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
