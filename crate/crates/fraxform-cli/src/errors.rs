//! Error-to-exit-code mapping.
//!
//! Contract: 0 success, 2 parse/usage error, 3 unsupported-method error,
//! 4 numeric-accuracy error, 5 identity failure.

use fraxform::atoms::AtomsError;
use fraxform::ode::OdeError;
use fraxform::oracle::OracleError;
use fraxform::order::OrderError;
use fraxform::parse::ParseError;
use fraxform::specfun::SpecfunError;
use fraxform::spectral::SpectralError;
use fraxform::transform::TransformError;

pub const EXIT_PARSE: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_ACCURACY: i32 = 4;
pub const EXIT_IDENTITY: i32 = 5;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, kind: &'static str, message: impl Into<String>) -> Self {
        CliError {
            code,
            kind,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        CliError::new(EXIT_PARSE, "usage", message)
    }

    pub fn identity_failure(message: impl Into<String>) -> Self {
        CliError::new(EXIT_IDENTITY, "identity", message)
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::new(EXIT_PARSE, "parse", e.to_string())
    }
}

impl From<OrderError> for CliError {
    fn from(e: OrderError) -> Self {
        CliError::new(EXIT_PARSE, "usage", e.to_string())
    }
}

impl From<SpecfunError> for CliError {
    fn from(e: SpecfunError) -> Self {
        match e {
            SpecfunError::InvalidConfig { .. } => CliError::new(EXIT_PARSE, "usage", e.to_string()),
            _ => CliError::new(EXIT_ACCURACY, "accuracy", e.to_string()),
        }
    }
}

impl From<AtomsError> for CliError {
    fn from(e: AtomsError) -> Self {
        match e {
            AtomsError::Specfun(inner) => inner.into(),
            _ => CliError::new(EXIT_UNSUPPORTED, "unsupported", e.to_string()),
        }
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        CliError::new(EXIT_UNSUPPORTED, "unsupported", e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::AccuracyBudget { .. } => {
                CliError::new(EXIT_ACCURACY, "accuracy", e.to_string())
            }
            OracleError::InvalidConfig { .. } => CliError::new(EXIT_PARSE, "usage", e.to_string()),
        }
    }
}

impl From<TransformError> for CliError {
    fn from(e: TransformError) -> Self {
        match e {
            TransformError::Atoms(inner) => inner.into(),
            TransformError::Oracle(inner) => inner.into(),
            TransformError::Spectral(inner) => inner.into(),
            _ => CliError::new(EXIT_UNSUPPORTED, "unsupported", e.to_string()),
        }
    }
}

impl From<OdeError> for CliError {
    fn from(e: OdeError) -> Self {
        match e {
            OdeError::Transform(inner) => inner.into(),
            _ => CliError::new(EXIT_UNSUPPORTED, "unsupported", e.to_string()),
        }
    }
}
