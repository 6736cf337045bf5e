use thiserror::Error;

/// Errors raised by the numerics, basis, dilation and channel layers.
///
/// Shape and parse problems surface as usage errors in the CLI; domain,
/// validation and internal failures as domain-validation errors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Operand dimensions do not fit the operation.
    #[error("shape error: {0}")]
    Shape(String),
    /// A scalar argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// A value failed an invariant check (normalization, hermiticity, ...).
    #[error("validation error: {0}")]
    Validation(String),
    /// An input document could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
    /// A result that should hold by construction did not.
    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn shape(msg: impl Into<String>) -> Error {
    Error::Shape(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn validation(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}
