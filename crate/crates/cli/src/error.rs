use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error(transparent)]
    Library(#[from] emcavity::Error),

    #[error("{summary}")]
    Tolerance { summary: String, details: Value },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    pub fn format(path: &Path, message: impl std::fmt::Display) -> Self {
        CliError::Format { path: path.to_path_buf(), message: message.to_string() }
    }

    pub fn exit_code(&self) -> u8 {
        use emcavity::Error as E;
        match self {
            CliError::Tolerance { .. } => 2,
            CliError::Library(
                E::GaussBonnet { .. }
                | E::IdentityViolation { .. }
                | E::IllPosed { .. }
                | E::CutoffTooLow { .. }
                | E::Bracketing { .. }
                | E::NonFinite { .. },
            ) => 2,
            _ => 1,
        }
    }

    fn kind(&self) -> &'static str {
        use emcavity::Error as E;
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Format { .. } => "format",
            CliError::Tolerance { .. } => "tolerance",
            CliError::Library(e) => match e {
                E::SingularChart { .. } => "singular_chart",
                E::NonFinite { .. } => "non_finite",
                E::Orientation { .. } => "orientation",
                E::MissingDerivatives { .. } => "missing_derivatives",
                E::Quadrature(_) => "quadrature",
                E::Topology(_) => "topology",
                E::GaussBonnet { .. } => "gauss_bonnet",
                E::Unsupported(_) => "unsupported",
                E::CutoffTooLow { .. } => "cutoff_too_low",
                E::Bracketing { .. } => "bracketing",
                E::IllPosed { .. } => "ill_posed",
                E::IdentityViolation { .. } => "identity_violation",
                E::InvalidInput(_) => "invalid_input",
                E::Parse { .. } => "parse",
            },
        }
    }

    /// One-line JSON for standard error.
    pub fn diagnostic(&self) -> String {
        let mut d = json!({
            "status": "error",
            "exit_code": self.exit_code(),
            "kind": self.kind(),
            "message": self.to_string(),
        });
        if let CliError::Tolerance { details, .. } = self {
            d["details"] = details.clone();
        }
        d.to_string()
    }
}
