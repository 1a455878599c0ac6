use thiserror::Error;

/// Every failure the library reports. Parameter points and numeric values
/// are carried as `f64` regardless of the scalar type in use.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("singular chart at (u, v) = ({u}, {v}): |r_u x r_v| = {cross}")]
    SingularChart { u: f64, v: f64, cross: f64 },

    #[error("non-finite {what} at (u, v) = ({u}, {v})")]
    NonFinite { what: &'static str, u: f64, v: f64 },

    #[error("enclosed volume {volume} is not positive: chart normals are not inward")]
    Orientation { volume: f64 },

    #[error("{what} needs embedding derivatives of order {required}, chart provides {available}")]
    MissingDerivatives { what: &'static str, required: usize, available: usize },

    #[error("invalid quadrature: {0}")]
    Quadrature(String),

    #[error("invalid topology: {0}")]
    Topology(String),

    #[error("Gauss-Bonnet residual {residual:e} exceeds tolerance {tolerance:e}")]
    GaussBonnet { residual: f64, tolerance: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("cutoff too low: {parameter} = {requested:e} below minimum usable {minimum:e}")]
    CutoffTooLow { parameter: &'static str, requested: f64, minimum: f64 },

    #[error("root bracketing failed for {family} l = {l}: {detail}")]
    Bracketing { family: &'static str, l: usize, detail: String },

    #[error("ill-posed fit: condition number {condition:e} exceeds {limit:e}; use a narrower basis")]
    IllPosed { condition: f64, limit: f64 },

    #[error("identity '{name}' violated: residual {residual:e} exceeds {tolerance:e}")]
    IdentityViolation { name: &'static str, residual: f64, tolerance: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
