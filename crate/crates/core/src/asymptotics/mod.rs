//! Coefficient extraction from sampled traces, regularized frequency sums
//! and the structure of their divergences.

mod fit;
mod lsq;
mod regulator;
mod remainder;
mod structure;

pub use fit::{fit_coefficients, gamma_half, log_grid, FitConfig, FitKind, FitResult, FitSample, FittedCoefficient, CONDITION_WARNING};
pub use lsq::CONDITION_LIMIT;
pub use regulator::{
    divergence_prediction, min_gamma, regularized_sum, regulator_integral, DivergencePrediction, RegularizedSum,
    RegulatorIntegral, RegulatorKind,
};
pub use remainder::{remainder_scan, BasisCoefficient, RemainderPoint, RemainderScan, ScanOptions, REMAINDER_BASIS};
pub use structure::{heat_expansion, mode_count, phi_expansion, resolvent_expansion, ModeCountReport, PhiExpansion, PHI_CONVENTION};
