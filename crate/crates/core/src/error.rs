use thiserror::Error;

/// Errors raised by lab operations.
///
/// The variants line up with the CLI exit codes: `Input` and `Precondition`
/// are caller mistakes, `Resource` is a hard bound being hit, and `Internal`
/// means two independent computations disagreed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabError {
    #[error("input error: {0}")]
    Input(String),
    #[error("improper filter: {0}")]
    ImproperFilter(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("resource bound exceeded: {0}")]
    Resource(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;

pub(crate) fn input(msg: impl Into<String>) -> LabError {
    LabError::Input(msg.into())
}

pub(crate) fn precondition(msg: impl Into<String>) -> LabError {
    LabError::Precondition(msg.into())
}

pub(crate) fn resource(msg: impl Into<String>) -> LabError {
    LabError::Resource(msg.into())
}

pub(crate) fn internal(msg: impl Into<String>) -> LabError {
    LabError::Internal(msg.into())
}
