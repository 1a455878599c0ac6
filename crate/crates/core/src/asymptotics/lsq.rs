//! Weighted linear least squares through an SVD of the column-equilibrated
//! design matrix.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Above this the fit is refused.
pub const CONDITION_LIMIT: f64 = 1e10;

#[derive(Debug, Clone)]
pub(crate) struct Solution {
    pub coefficients: Vec<f64>,
    /// Standard errors from the stated `σ`, inflated by `√(χ²/dof)` when
    /// the scatter exceeds what `σ` accounts for.
    pub std_errors: Vec<f64>,
    pub condition: f64,
    pub chi2: f64,
    pub dof: usize,
    pub residuals: Vec<f64>,
}

/// Minimizes `Σ ((y_i − Σ_j c_j A_ij) / σ_i)²`.
pub(crate) fn solve(design: &DMatrix<f64>, y: &[f64], sigma: &[f64]) -> Result<Solution> {
    let (m, p) = design.shape();
    if m < p || p == 0 {
        return Err(Error::InvalidInput(format!("least squares with {m} samples and {p} unknowns")));
    }
    if let Some(i) = sigma.iter().position(|&s| !(s > 0.0) || !s.is_finite()) {
        return Err(Error::InvalidInput(format!("sample {i} has non-positive or non-finite weight scale {}", sigma[i])));
    }
    let mut a = DMatrix::from_fn(m, p, |i, j| design[(i, j)] / sigma[i]);
    let b = DVector::from_iterator(m, y.iter().zip(sigma).map(|(v, s)| v / s));
    let mut norms = vec![0.0; p];
    for (j, n) in norms.iter_mut().enumerate() {
        *n = a.column(j).norm();
        if !(*n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidInput(format!("basis column {j} vanishes on the sample set")));
        }
        a.column_mut(j).scale_mut(1.0 / *n);
    }
    let svd = a.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if condition > CONDITION_LIMIT {
        return Err(Error::IllPosed { condition, limit: CONDITION_LIMIT });
    }
    let u = svd.u.as_ref().expect("requested U");
    let vt = svd.v_t.as_ref().expect("requested V^T");
    let s = &svd.singular_values;
    let utb = u.transpose() * &b;
    let mut scaled = DVector::zeros(p);
    for k in 0..p {
        scaled += vt.row(k).transpose() * (utb[k] / s[k]);
    }
    let coefficients: Vec<f64> = (0..p).map(|j| scaled[j] / norms[j]).collect();

    let residuals: Vec<f64> = (0..m)
        .map(|i| y[i] - (0..p).map(|j| design[(i, j)] * coefficients[j]).sum::<f64>())
        .collect();
    let chi2: f64 = residuals.iter().zip(sigma).map(|(r, s)| (r / s).powi(2)).sum();
    let dof = m - p;
    let variance = if dof > 0 { (chi2 / dof as f64).max(1.0) } else { 1.0 };
    let std_errors = (0..p)
        .map(|j| {
            let diag: f64 = (0..p).map(|k| (vt[(k, j)] / s[k]).powi(2)).sum();
            (diag * variance).sqrt() / norms[j]
        })
        .collect();
    Ok(Solution { coefficients, std_errors, condition, chi2, dof, residuals })
}
