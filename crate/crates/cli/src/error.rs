use std::fmt;

use crate::circuit::Diagnostic;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid config field `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{}", DiagnosticList(.0))]
    Circuit(Vec<Diagnostic>),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Engine(#[from] abqt_core::Error),
}

struct DiagnosticList<'a>(&'a [Diagnostic]);

impl fmt::Display for DiagnosticList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl CliError {
    pub fn config(field: &str, message: impl Into<String>) -> Self {
        CliError::Config {
            field: field.to_string(),
            message: message.into(),
        }
    }

    /// 1 validation, 2 verification failure, 3 internal invariant breach.
    pub fn exit_code(&self) -> i32 {
        use abqt_core::Error as E;
        match self {
            CliError::Config { .. } | CliError::Io { .. } | CliError::Circuit(_) => 1,
            CliError::Verification(_) => 2,
            CliError::Internal(_) => 3,
            CliError::Engine(e) => match e {
                E::InvalidParameter(_) | E::NonFinite(_) | E::CutoffTooSmall { .. } | E::NoCorrectionDefined => 1,
                _ => 3,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
