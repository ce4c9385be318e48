use thiserror::Error;

use crate::constructions::ConditionReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or inconsistent arguments.
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// Well-formed arguments that no construction covers.
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    /// A configured budget (enumeration, nodes, field size) would be exceeded.
    #[error("resource limit: {0}")]
    Resource(String),
    /// An operation's input contract does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// The primitive element fails the family's discrete-log condition.
    #[error("condition not satisfied: {0}")]
    ConditionUnsatisfied(Box<ConditionReport>),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
