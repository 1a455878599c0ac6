use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::lsq;
use super::regulator::{regularized_sum_with, DivergencePrediction};
use crate::error::Result;
use crate::spectrum::{ModeList, TailModel};
use crate::Real;

/// Labels of the functions fitted to the remainder, in order.
pub const REMAINDER_BASIS: [&str; 4] = ["1", "gamma^-1/2", "gamma^1/2 log gamma", "gamma^1/2"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RemainderPoint {
    pub gamma: f64,
    pub sum: f64,
    pub bound: f64,
    pub prediction: f64,
    pub remainder: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BasisCoefficient {
    pub label: &'static str,
    pub value: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RemainderScan {
    pub prediction: DivergencePrediction,
    pub points: Vec<RemainderPoint>,
    pub fit: Vec<BasisCoefficient>,
    pub condition_number: f64,
    /// The `γ^{−1/2}` component in units of its standard error.
    pub divergent_sigmas: f64,
    /// Constant term of the fit: the `γ → 0` limit of the remainder.
    pub extrapolated: BasisCoefficient,
    /// Whether the `γ^{−1/2}` component lies within `sigma_limit`
    /// standard errors of zero.
    pub finite: bool,
    pub sigma_limit: f64,
}

impl RemainderScan {
    pub fn divergent(&self) -> BasisCoefficient {
        self.fit[1]
    }
}

/// Options for [`remainder_scan`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    /// Absolute truncation tolerance for each regularized sum.
    pub atol: f64,
    /// `finite` requires `|c₋₁/₂| ≤ sigma_limit · σ`.
    pub sigma_limit: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { atol: 1e-3, sigma_limit: 1.0 }
    }
}

/// `r(γ) = S(γ) − prediction(γ)` on a grid, fitted by
/// `c₀ + c₋₁/₂ γ^{−1/2} + c_L γ^{1/2} log γ + c₁/₂ γ^{1/2}`.
///
/// Each point is weighted by its truncation bound, the rounding of a sum of
/// that size, the relative accuracy of the eigenvalues, and a model term
/// `γ |log γ|` for the first order the basis leaves out, sized by the
/// `γ^{1/2}`-order coefficients of a preliminary fit.
pub fn remainder_scan<T: Real>(
    modes: &ModeList<T>,
    prediction: &DivergencePrediction,
    gammas: &[f64],
    options: ScanOptions,
) -> Result<RemainderScan> {
    let tail = TailModel::calibrate(modes);
    let mut points = Vec::with_capacity(gammas.len());
    for &gamma in gammas {
        let s = regularized_sum_with(modes, &tail, gamma, prediction.kind, options.atol)?;
        let p = prediction.evaluate(gamma);
        points.push(RemainderPoint { gamma, sum: s.value, bound: s.bound, prediction: p, remainder: s.value - p });
    }
    let design = DMatrix::from_fn(points.len(), 4, |i, j| {
        let g = points[i].gamma;
        match j {
            0 => 1.0,
            1 => g.powf(-0.5),
            2 => g.sqrt() * g.ln(),
            _ => g.sqrt(),
        }
    });
    let y: Vec<f64> = points.iter().map(|p| p.remainder).collect();
    let accuracy = modes.root_accuracy();
    let base: Vec<f64> = points
        .iter()
        .map(|p| p.bound + (accuracy + 8.0 * f64::EPSILON) * p.sum.abs() + 8.0 * f64::EPSILON * p.prediction.abs() + f64::MIN_POSITIVE)
        .collect();
    let first = lsq::solve(&design, &y, &base)?;
    let scale = first.coefficients[2].abs() + first.coefficients[3].abs();
    let sigma: Vec<f64> = points.iter().zip(&base).map(|(p, b)| b + scale * p.gamma * p.gamma.ln().abs()).collect();
    let sol = lsq::solve(&design, &y, &sigma)?;
    let fit: Vec<BasisCoefficient> = (0..4)
        .map(|j| BasisCoefficient { label: REMAINDER_BASIS[j], value: sol.coefficients[j], std_error: sol.std_errors[j] })
        .collect();
    let divergent_sigmas = if fit[1].std_error > 0.0 { fit[1].value.abs() / fit[1].std_error } else { f64::INFINITY };
    Ok(RemainderScan {
        prediction: *prediction,
        extrapolated: fit[0],
        finite: fit[1].value.abs() <= options.sigma_limit * fit[1].std_error,
        sigma_limit: options.sigma_limit,
        divergent_sigmas,
        condition_number: sol.condition,
        fit,
        points,
    })
}
