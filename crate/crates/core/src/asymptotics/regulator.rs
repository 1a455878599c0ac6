use serde::{Deserialize, Serialize};

use crate::coefficients::HeatCoefficientSet;
use crate::error::{Error, Result};
use crate::geometry::quadrature::gauss_legendre;
use crate::spectrum::{ModeList, TailModel};
use crate::sum::CompensatedSum;
use crate::Real;

/// Cut-off function applied to `√λ` in the regularized frequency sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegulatorKind {
    /// `e^{−γλ}`
    Heat,
    /// `e^{−(γλ)^{1/2}}`
    Sqrt,
}

impl RegulatorKind {
    pub fn weight(self, gamma: f64, lambda: f64) -> f64 {
        match self {
            RegulatorKind::Heat => (-gamma * lambda).exp(),
            RegulatorKind::Sqrt => (-(gamma * lambda).sqrt()).exp(),
        }
    }

    /// Bound on the part of `Σ √λ·weight` above the cutoff, from the
    /// calibrated tail density `ρ(ω) ≤ c ω²`.
    pub fn tail_bound(self, tail: &TailModel, gamma: f64) -> f64 {
        let (c, x) = (tail.density, tail.cutoff);
        match self {
            RegulatorKind::Heat => {
                let e = (-gamma * x * x).exp();
                c * e * (x * x / (2.0 * gamma) + 1.0 / (2.0 * gamma * gamma))
            }
            RegulatorKind::Sqrt => {
                let a = gamma.sqrt();
                let e = (-a * x).exp();
                c * e * (x.powi(3) / a + 3.0 * x * x / (a * a) + 6.0 * x / a.powi(3) + 6.0 / a.powi(4))
            }
        }
    }
}

impl std::str::FromStr for RegulatorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "heat" => Ok(RegulatorKind::Heat),
            "sqrt" => Ok(RegulatorKind::Sqrt),
            _ => Err(Error::InvalidInput(format!("unknown regulator '{s}', expected heat or sqrt"))),
        }
    }
}

/// `S(γ) = Σ mult·√λ·weight(γλ)` with the bound on what the cutoff misses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularizedSum {
    pub gamma: f64,
    pub value: f64,
    pub bound: f64,
}

/// Regularized frequency sum. Fails when the truncation bound exceeds the
/// absolute tolerance `atol`, reporting the smallest usable `γ`.
pub fn regularized_sum<T: Real>(modes: &ModeList<T>, gamma: f64, kind: RegulatorKind, atol: f64) -> Result<RegularizedSum> {
    let tail = TailModel::calibrate(modes);
    regularized_sum_with(modes, &tail, gamma, kind, atol)
}

pub(crate) fn regularized_sum_with<T: Real>(
    modes: &ModeList<T>,
    tail: &TailModel,
    gamma: f64,
    kind: RegulatorKind,
    atol: f64,
) -> Result<RegularizedSum> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidInput(format!("regularized sum needs gamma > 0, got {gamma}")));
    }
    let bound = kind.tail_bound(tail, gamma);
    if bound > atol {
        return Err(Error::CutoffTooLow { parameter: "gamma", requested: gamma, minimum: min_gamma(tail, kind, atol) });
    }
    let mut acc = CompensatedSum::new();
    for e in modes.entries() {
        let lambda = e.lambda.to_f64_lossy();
        acc.add(e.multiplicity as f64 * lambda.sqrt() * kind.weight(gamma, lambda));
    }
    Ok(RegularizedSum { gamma, value: acc.value(), bound })
}

/// Smallest `γ` whose truncation bound is at most `atol`.
pub fn min_gamma(tail: &TailModel, kind: RegulatorKind, atol: f64) -> f64 {
    let (mut lo, mut hi) = (1e-300_f64, 1.0_f64);
    while kind.tail_bound(tail, hi) > atol && hi < 1e300 {
        hi *= 4.0;
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if kind.tail_bound(tail, mid) > atol {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi / lo < 1.0 + 1e-12 {
            break;
        }
    }
    hi
}

/// Coefficients of the divergent part of `S(γ)`:
/// `c₋₂ γ^{−2} + c₋₃/₂ γ^{−3/2} + c₋₁ γ^{−1} + c₋₁/₂ γ^{−1/2} + c_log log γ`.
/// The `O(1)` part is not predicted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivergencePrediction {
    pub kind: RegulatorKind,
    pub gamma_m2: f64,
    pub gamma_m3_2: f64,
    pub gamma_m1: f64,
    /// Always zero: `a₃` does not produce a divergence.
    pub gamma_m1_2: f64,
    pub log_gamma: f64,
}

impl DivergencePrediction {
    pub fn evaluate(&self, gamma: f64) -> f64 {
        self.gamma_m2 / (gamma * gamma)
            + self.gamma_m3_2 / gamma.powf(1.5)
            + self.gamma_m1 / gamma
            + self.gamma_m1_2 / gamma.sqrt()
            + self.log_gamma * gamma.ln()
    }

    /// The same prediction with the `γ^{−1}` term dropped.
    pub fn without_gamma_m1(mut self) -> Self {
        self.gamma_m1 = 0.0;
        self
    }
}

/// Divergences of the regularized sum implied by `a₀ … a₄`.
///
/// `HEAT`: `(2/√π)a₀`, `(√π/2)a₁`, `a₂/√π`, `0`, `a₄/(2√π)`.
/// `SQRT`: `(24/√π)a₀`, `4a₁`, `(2/√π)a₂`, `0`, `a₄/(2√π)`. The `SQRT`
/// map follows from subordination, `e^{−sω} = ∫ s(4π)^{−1/2} τ^{−3/2}
/// e^{−s²/4τ} e^{−τω²} dτ`, applied term by term to the heat expansion;
/// the `a₄` term gives `−(a₄/√π) s log s` in `Σ e^{−sω}` and hence
/// `(a₄/2√π) log γ` after differentiating in `s = √γ`.
pub fn divergence_prediction<T: Real>(a: &HeatCoefficientSet<T>, kind: RegulatorKind) -> DivergencePrediction {
    let v: Vec<f64> = a.values.iter().map(|x| x.to_f64_lossy()).collect();
    let sp = std::f64::consts::PI.sqrt();
    let log_gamma = v[4] / (2.0 * sp);
    match kind {
        RegulatorKind::Heat => DivergencePrediction {
            kind,
            gamma_m2: 2.0 / sp * v[0],
            gamma_m3_2: sp / 2.0 * v[1],
            gamma_m1: v[2] / sp,
            gamma_m1_2: 0.0,
            log_gamma,
        },
        RegulatorKind::Sqrt => DivergencePrediction {
            kind,
            gamma_m2: 24.0 / sp * v[0],
            gamma_m3_2: 4.0 * v[1],
            gamma_m1: 2.0 / sp * v[2],
            gamma_m1_2: 0.0,
            log_gamma,
        },
    }
}

/// `∫₀^δ t^{−1/2} (t + γ)^{(n−5)/2} dt` by quadrature, next to its leading
/// small-`γ` form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegulatorIntegral {
    pub n: usize,
    pub gamma: f64,
    pub delta: f64,
    pub value: f64,
    pub error: f64,
    pub asymptote: f64,
}

/// With `t = γ sinh² y` the integral becomes
/// `2 γ^{(n−4)/2} ∫₀^Y cosh^{n−4} y dy`, `Y = asinh √(δ/γ)`, whose
/// integrand is smooth and bounded; composite Gauss–Legendre with one
/// refinement gives the value and its error.
pub fn regulator_integral(n: usize, gamma: f64, delta: f64) -> Result<RegulatorIntegral> {
    if n > 4 {
        return Err(Error::InvalidInput(format!("regulator integral tabulated for n = 0..4, got {n}")));
    }
    if !(gamma > 0.0) || !(delta > gamma) {
        return Err(Error::InvalidInput(format!("need 0 < gamma < delta, got gamma = {gamma}, delta = {delta}")));
    }
    let upper = (delta / gamma).sqrt().asinh();
    let power = n as i32 - 4;
    let f = |y: f64| y.cosh().powi(power);
    let coarse = composite(&f, upper, (upper / 0.5).ceil() as usize);
    let fine = composite(&f, upper, 2 * (upper / 0.5).ceil() as usize);
    let pre = 2.0 * gamma.powf(power as f64 / 2.0);
    let value = pre * fine;
    let error = pre * (fine - coarse).abs();
    if error > 1e-10 * value.abs().max(1.0) {
        return Err(Error::Quadrature(format!("regulator integral n = {n} did not converge: error {error:e}")));
    }
    let sp = std::f64::consts::PI;
    let asymptote = match n {
        0 => 4.0 / 3.0 / (gamma * gamma),
        1 => sp / 2.0 * gamma.powf(-1.5),
        2 => 2.0 / gamma,
        3 => sp / gamma.sqrt(),
        _ => -gamma.ln(),
    };
    Ok(RegulatorIntegral { n, gamma, delta, value, error, asymptote })
}

fn composite(f: &impl Fn(f64) -> f64, upper: f64, panels: usize) -> f64 {
    let (nodes, weights) = gauss_legendre::<f64>(20);
    let h = upper / panels as f64;
    let mut acc = CompensatedSum::new();
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * h;
        for (x, w) in nodes.iter().zip(&weights) {
            acc.add(0.5 * h * w * f(mid + 0.5 * h * x));
        }
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{CoefficientKind, Provenance};
    use crate::spectrum::{Family, Mode};

    fn set(values: [f64; 6]) -> HeatCoefficientSet<f64> {
        HeatCoefficientSet::exact(CoefficientKind::Em, values, Provenance::ClosedForm)
    }

    #[test]
    fn single_mode_sums() {
        let one = |lambda: f64| {
            ModeList::new(vec![Mode { family: Family::Te, l: 1, m: 1, multiplicity: 1, lambda }], 3.0, 1.0, 0.0).unwrap()
        };
        let s = regularized_sum(&one(1.0), 1.0, RegulatorKind::Sqrt, 1.0).unwrap();
        assert!((s.value - (-1.0f64).exp()).abs() < 1e-16);
        let s = regularized_sum(&one(4.0), 1e-12, RegulatorKind::Heat, f64::INFINITY).unwrap();
        assert!((s.value - 2.0).abs() < 1e-10);
    }

    #[test]
    fn sqrt_map_is_twelve_times_heat_at_leading_order() {
        let a = set([0.3, 0.1, -0.2, 0.7, 0.05, 0.01]);
        let h = divergence_prediction(&a, RegulatorKind::Heat);
        let s = divergence_prediction(&a, RegulatorKind::Sqrt);
        assert!((s.gamma_m2 - 12.0 * h.gamma_m2).abs() < 1e-15);
        assert_eq!(h.gamma_m1_2, 0.0);
        assert_eq!(s.gamma_m1_2, 0.0);
        let zero = divergence_prediction(&set([0.0; 6]), RegulatorKind::Sqrt);
        assert_eq!(zero.evaluate(0.01), 0.0);
    }

    #[test]
    fn heat_map_term_by_term() {
        let sp = std::f64::consts::PI.sqrt();
        let a = set([1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let h = divergence_prediction(&a, RegulatorKind::Heat);
        assert_eq!([h.gamma_m2, h.gamma_m3_2, h.gamma_m1, h.gamma_m1_2, h.log_gamma], [2.0 / sp, sp, 3.0 / sp, 0.0, 5.0 / (2.0 * sp)]);
    }

    #[test]
    fn regulator_integrals_approach_their_asymptotes() {
        for n in 0..=4 {
            let r = regulator_integral(n, 1e-6, 1.0).unwrap();
            assert!((r.value - r.asymptote).abs() < 5.0, "n = {n}: {} vs {}", r.value, r.asymptote);
        }
        assert!(regulator_integral(5, 1e-6, 1.0).is_err());
    }

    #[test]
    fn regulator_integral_n2_closed_form() {
        // 2γ^{-1} tanh(Y) with Y = asinh √(δ/γ)
        let (g, d) = (1e-3, 1.0);
        let r = regulator_integral(2, g, d).unwrap();
        let want = 2.0 / g * ((d / g).sqrt().asinh()).tanh();
        assert!((r.value - want).abs() < 1e-12 * want);
    }
}
