use std::fmt;

use lagt_core::LagError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Usage,
    Io,
    Numeric,
}

/// An error together with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub kind: Kind,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { kind: Kind::Usage, message: message.into() }
    }

    pub fn io(err: impl fmt::Display) -> Self {
        Failure { kind: Kind::Io, message: err.to_string() }
    }

    pub fn code(&self) -> u8 {
        match self.kind {
            Kind::Usage => 1,
            Kind::Io => 2,
            Kind::Numeric => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Kind::Numeric => write!(f, "numeric guard: {}", self.message),
            _ => f.write_str(&self.message),
        }
    }
}

impl From<LagError> for Failure {
    fn from(e: LagError) -> Self {
        let kind = match e {
            LagError::InvalidArgument(_) | LagError::DimensionMismatch(_) => Kind::Usage,
            LagError::GuardExceeded { .. }
            | LagError::AllocationGuard { .. }
            | LagError::EmptySpectrum
            | LagError::DivisionByZero => Kind::Numeric,
        };
        Failure { kind, message: e.to_string() }
    }
}
