use thiserror::Error;

/// An argument outside the domain where an operation is defined.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("{what} (got {value})")]
pub struct DomainError {
    /// Which constraint was violated.
    pub what: &'static str,
    /// The offending value.
    pub value: f64,
}

impl DomainError {
    pub(crate) const fn new(what: &'static str, value: f64) -> Self {
        Self { what, value }
    }
}

/// Returns `Err` unless `cond` holds.
pub(crate) fn ensure(cond: bool, what: &'static str, value: f64) -> Result<(), DomainError> {
    if cond {
        Ok(())
    } else {
        Err(DomainError::new(what, value))
    }
}
