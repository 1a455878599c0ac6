//! Electromagnetic heat-kernel coefficients of smooth cavities.
//!
//! The crate evaluates the six small-time heat-trace coefficients of the
//! Maxwell operator in a perfectly conducting cavity from curvature
//! integrals over its boundary, checks them against exact p-form
//! coefficient tables and against the exact spectrum of the ball, and
//! analyses the divergence structure of regularized mode sums.
//!
//! All numerics are generic over [`Real`]; the `f64` aliases below cover
//! the usual case.

pub mod asymptotics;
pub mod coefficients;
pub mod error;
pub mod geometry;
pub mod spectrum;
mod scalar;
mod sum;

pub use error::{Error, Result};
pub use scalar::Real;
pub use sum::{compensated_sum, CompensatedSum};

pub type Moments = coefficients::GeometricMoments<f64>;
pub type CoefficientSet = coefficients::HeatCoefficientSet<f64>;
pub type Surface = geometry::SurfaceModel<f64>;
pub type Sample = geometry::CurvatureSample<f64>;
pub type Modes = spectrum::ModeList<f64>;
pub type ModeEntry = spectrum::Mode<f64>;
