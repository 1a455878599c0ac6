use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::lsq;
use crate::coefficients::{CoefficientKind, HeatCoefficientSet, Provenance};
use crate::error::{Error, Result};
use crate::spectrum::{ResolventSample, TraceSample};

/// Condition numbers above this are flagged in the result.
pub const CONDITION_WARNING: f64 = 1e6;

/// `Γ(k/2)` for `k ≥ 1`.
pub fn gamma_half(k: usize) -> f64 {
    assert!(k >= 1, "gamma_half needs k >= 1");
    let mut g = if k % 2 == 0 { 1.0 } else { std::f64::consts::PI.sqrt() };
    let mut x = if k % 2 == 0 { 1.0 } else { 0.5 };
    while 2.0 * x < k as f64 {
        g *= x;
        x += 1.0;
    }
    g
}

/// Which expansion the samples follow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitKind {
    /// `K(t) = Σ aₙ t^{(n−3)/2}`
    Heat,
    /// `T₂(μ) = Σ Γ((n+1)/2) aₙ μ^{−(n+1)/2}`
    Resolvent,
}

impl FitKind {
    /// Basis function multiplying `aₙ`.
    pub fn basis(self, n: usize, x: f64) -> f64 {
        match self {
            FitKind::Heat => x.powf((n as f64 - 3.0) / 2.0),
            FitKind::Resolvent => gamma_half(n + 1) * x.powf(-(n as f64 + 1.0) / 2.0),
        }
    }

    /// Exponent of `x` carried by `aₙ`.
    pub fn exponent(self, n: usize) -> f64 {
        match self {
            FitKind::Heat => (n as f64 - 3.0) / 2.0,
            FitKind::Resolvent => -(n as f64 + 1.0) / 2.0,
        }
    }
}

/// One sampled value with its truncation bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitSample {
    pub x: f64,
    pub value: f64,
    pub bound: f64,
}

impl From<TraceSample> for FitSample {
    fn from(s: TraceSample) -> Self {
        Self { x: s.t, value: s.value, bound: s.bound }
    }
}

impl From<ResolventSample> for FitSample {
    fn from(s: ResolventSample) -> Self {
        Self { x: s.mu, value: s.value, bound: s.bound }
    }
}

/// Basis indices `n` refer to `aₙ`, so for heat traces `n ↦ t^{(n−3)/2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    pub kind: FitKind,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub basis: Vec<usize>,
    /// Coefficients held fixed and subtracted before solving.
    pub pinned: Vec<(usize, f64)>,
}

impl FitConfig {
    /// All six heat coefficients on a log-spaced `t` grid.
    pub fn heat(t_lo: f64, t_hi: f64, points: usize) -> Self {
        Self { kind: FitKind::Heat, lo: t_lo, hi: t_hi, points, basis: (0..6).collect(), pinned: Vec::new() }
    }

    pub fn resolvent(mu_lo: f64, mu_hi: f64, points: usize) -> Self {
        Self { kind: FitKind::Resolvent, lo: mu_lo, hi: mu_hi, points, basis: (0..6).collect(), pinned: Vec::new() }
    }

    pub fn with_basis(mut self, basis: &[usize]) -> Self {
        self.basis = basis.to_vec();
        self
    }

    pub fn pin(mut self, n: usize, value: f64) -> Self {
        self.pinned.retain(|&(m, _)| m != n);
        self.pinned.push((n, value));
        if !self.basis.contains(&n) {
            self.basis.push(n);
        }
        self
    }

    fn free(&self) -> Vec<usize> {
        let mut free: Vec<usize> = self.basis.iter().copied().filter(|n| !self.pinned.iter().any(|&(m, _)| m == *n)).collect();
        free.sort_unstable();
        free.dedup();
        free
    }

    /// Log-spaced sample positions.
    pub fn grid(&self) -> Vec<f64> {
        log_grid(self.lo, self.hi, self.points)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo > 0.0) || !(self.hi > self.lo) || !self.hi.is_finite() {
            return Err(Error::InvalidInput(format!("fit window [{}, {}] is not a positive interval", self.lo, self.hi)));
        }
        if let Some(&n) = self.basis.iter().find(|&&n| n > 5) {
            return Err(Error::InvalidInput(format!("basis index {n} outside a0..a5")));
        }
        let free = self.free().len();
        if free == 0 {
            return Err(Error::InvalidInput("no free coefficients to fit".into()));
        }
        if self.points < 2 * free {
            return Err(Error::InvalidInput(format!("{} grid points for {free} free coefficients; need at least {}", self.points, 2 * free)));
        }
        Ok(())
    }
}

/// `points` log-spaced values from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points <= 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    let mut g: Vec<f64> = (0..points).map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp()).collect();
    g[0] = lo;
    g[points - 1] = hi;
    g
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FittedCoefficient {
    pub n: usize,
    pub exponent: f64,
    pub value: f64,
    pub std_error: f64,
    pub pinned: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub kind: FitKind,
    pub coefficients: Vec<FittedCoefficient>,
    /// `√(χ²/dof)` of the final weighted fit.
    pub residual_norm: f64,
    pub max_relative_residual: f64,
    pub condition_number: f64,
    pub ill_conditioned: bool,
    pub window: [f64; 2],
    pub points: usize,
}

impl FitResult {
    pub fn get(&self, n: usize) -> Option<&FittedCoefficient> {
        self.coefficients.iter().find(|c| c.n == n)
    }

    /// The fitted values as a coefficient set; coefficients outside the
    /// basis are zero with infinite error.
    pub fn to_set(&self, kind: CoefficientKind) -> HeatCoefficientSet<f64> {
        let mut values = [0.0; 6];
        let mut errors = [f64::INFINITY; 6];
        for c in &self.coefficients {
            values[c.n] = c.value;
            errors[c.n] = c.std_error;
        }
        HeatCoefficientSet { kind, values, errors, provenance: Provenance::SpectralFit }
    }
}

/// Weighted least squares for the expansion coefficients.
///
/// Each sample is weighted by `1/σ²` with `σ` the truncation bound, a
/// rounding floor, and a model term for the first omitted order, sized by
/// the highest coefficient of a preliminary fit.
pub fn fit_coefficients(samples: &[FitSample], config: &FitConfig) -> Result<FitResult> {
    config.validate()?;
    let free = config.free();
    if samples.len() < 2 * free.len() {
        return Err(Error::InvalidInput(format!("{} samples for {} free coefficients", samples.len(), free.len())));
    }
    let slack = 1e-9 * config.hi;
    if let Some(s) = samples.iter().find(|s| s.x < config.lo - slack || s.x > config.hi + slack || !s.value.is_finite()) {
        return Err(Error::InvalidInput(format!("sample at {} outside the window [{}, {}] or non-finite", s.x, config.lo, config.hi)));
    }
    let kind = config.kind;
    let y: Vec<f64> = samples
        .iter()
        .map(|s| s.value - config.pinned.iter().map(|&(n, c)| c * kind.basis(n, s.x)).sum::<f64>())
        .collect();
    let design = DMatrix::from_fn(samples.len(), free.len(), |i, j| kind.basis(free[j], samples[i].x));
    let floor: Vec<f64> = samples.iter().map(|s| s.bound + 4.0 * f64::EPSILON * s.value.abs() + f64::MIN_POSITIVE).collect();

    let first = lsq::solve(&design, &y, &floor)?;
    let last = *config.basis.iter().max().expect("non-empty basis");
    let last_value = match config.pinned.iter().find(|&&(n, _)| n == last) {
        Some(&(_, c)) => c,
        None => first.coefficients[free.iter().position(|&n| n == last).expect("free")],
    };
    let sigma: Vec<f64> = samples
        .iter()
        .zip(&floor)
        .map(|(s, f)| f + (last_value * next_order(kind, last, s.x)).abs())
        .collect();
    let sol = lsq::solve(&design, &y, &sigma)?;

    let mut coefficients: Vec<FittedCoefficient> = free
        .iter()
        .enumerate()
        .map(|(j, &n)| FittedCoefficient {
            n,
            exponent: kind.exponent(n),
            value: sol.coefficients[j],
            std_error: sol.std_errors[j],
            pinned: false,
        })
        .chain(config.pinned.iter().map(|&(n, c)| FittedCoefficient {
            n,
            exponent: kind.exponent(n),
            value: c,
            std_error: 0.0,
            pinned: true,
        }))
        .collect();
    coefficients.sort_by_key(|c| c.n);
    let max_relative_residual = sol
        .residuals
        .iter()
        .zip(samples)
        .map(|(r, s)| (r / s.value).abs())
        .fold(0.0, f64::max);
    let lo = samples.iter().map(|s| s.x).fold(f64::INFINITY, f64::min);
    let hi = samples.iter().map(|s| s.x).fold(0.0, f64::max);
    Ok(FitResult {
        kind,
        coefficients,
        residual_norm: if sol.dof > 0 { (sol.chi2 / sol.dof as f64).sqrt() } else { 0.0 },
        max_relative_residual,
        condition_number: sol.condition,
        ill_conditioned: sol.condition > CONDITION_WARNING,
        window: [lo, hi],
        points: samples.len(),
    })
}

/// Size of the first term beyond `a_last` per unit coefficient.
fn next_order(kind: FitKind, last: usize, x: f64) -> f64 {
    match kind {
        FitKind::Heat => x.powf((last as f64 - 2.0) / 2.0),
        FitKind::Resolvent => gamma_half(last + 2) * x.powf(-(last as f64 + 2.0) / 2.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: [f64; 6] = [0.188063194515, 0.0917, -0.752252778, 0.625, -0.0286524, 0.003125];

    fn synthetic(kind: FitKind, xs: &[f64]) -> Vec<FitSample> {
        xs.iter()
            .map(|&x| FitSample { x, value: (0..6).map(|n| A[n] * kind.basis(n, x)).sum(), bound: 0.0 })
            .collect()
    }

    #[test]
    fn half_integer_gamma_values() {
        let sp = std::f64::consts::PI.sqrt();
        let want = [sp, 1.0, sp / 2.0, 1.0, 0.75 * sp, 2.0, 15.0 / 8.0 * sp];
        for (k, w) in want.iter().enumerate() {
            assert!((gamma_half(k + 1) - w).abs() < 1e-15 * w);
        }
    }

    #[test]
    fn exact_heat_data_is_inverted() {
        let cfg = FitConfig::heat(0.5, 50.0, 40);
        let fit = fit_coefficients(&synthetic(FitKind::Heat, &cfg.grid()), &cfg).unwrap();
        for c in &fit.coefficients {
            let tol = 1e-10 * A[c.n].abs();
            assert!((c.value - A[c.n]).abs() < tol, "a{} = {} vs {}", c.n, c.value, A[c.n]);
        }
        assert!(fit.max_relative_residual < 1e-12);
    }

    #[test]
    fn exact_resolvent_data_is_inverted() {
        let cfg = FitConfig::resolvent(50.0, 500.0, 30).with_basis(&[0, 1, 2, 3]);
        let xs = cfg.grid();
        let samples: Vec<FitSample> = xs
            .iter()
            .map(|&x| FitSample { x, value: (0..4).map(|n| A[n] * FitKind::Resolvent.basis(n, x)).sum(), bound: 0.0 })
            .collect();
        let fit = fit_coefficients(&samples, &cfg).unwrap();
        for c in &fit.coefficients {
            assert!((c.value - A[c.n]).abs() < 1e-9 * A[c.n].abs().max(1e-2));
        }
    }

    #[test]
    fn pinned_coefficients_are_subtracted() {
        let cfg = FitConfig::heat(0.006, 0.06, 40).pin(1, A[1]);
        let fit = fit_coefficients(&synthetic(FitKind::Heat, &cfg.grid()), &cfg).unwrap();
        let a1 = fit.get(1).unwrap();
        assert!(a1.pinned && a1.value == A[1] && a1.std_error == 0.0);
        assert!((fit.get(3).unwrap().value - 0.625).abs() < 1e-9);
    }

    #[test]
    fn too_few_points_rejected() {
        let cfg = FitConfig::heat(0.01, 0.1, 11);
        assert!(cfg.validate().is_err());
    }
}
