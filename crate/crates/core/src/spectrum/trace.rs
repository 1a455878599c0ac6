use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::modes::ModeList;
use crate::error::{Error, Result};
use crate::sum::CompensatedSum;
use crate::Real;

/// Over-estimation factor applied to the calibrated tail density.
const TAIL_SAFETY: f64 = 1.25;

/// Smooth description of the spectrum beyond the cutoff `X`.
///
/// `density` is the constant `c` of `ρ(ω) ≈ c ω²`, calibrated on the
/// counted modes in `(0.9 X, X]`; it drives the truncation bounds. The
/// cubic `counting` fit `N(ω) ≈ α ω³ + β ω² + γ ω` on `[X/2, X]` drives
/// tail corrections, with `fluctuation` the largest deviation of the counted
/// `N` from that fit inside the window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailModel {
    pub cutoff: f64,
    pub density: f64,
    pub counting: [f64; 3],
    pub fluctuation: f64,
}

impl TailModel {
    pub fn calibrate<T: Real>(modes: &ModeList<T>) -> Self {
        let x = modes.omega_max().to_f64_lossy();
        let omegas: Vec<f64> = modes.entries().iter().map(|e| e.omega().to_f64_lossy()).collect();
        let mut cumulative = Vec::with_capacity(omegas.len());
        let mut total = 0u64;
        for e in modes.entries() {
            total += e.multiplicity as u64;
            cumulative.push(total);
        }
        let count_at = |w: f64| -> f64 {
            let k = omegas.partition_point(|&o| o <= w);
            if k == 0 {
                0.0
            } else {
                cumulative[k - 1] as f64
            }
        };
        if total == 0 {
            return Self { cutoff: x, density: 0.0, counting: [0.0; 3], fluctuation: 0.0 };
        }
        let top = count_at(x) - count_at(0.9 * x);
        let density = if top > 0.0 {
            3.0 * top / (x.powi(3) * (1.0 - 0.729))
        } else {
            3.0 * count_at(x) / x.powi(3)
        } * TAIL_SAFETY;

        let samples = 256;
        let ws: Vec<f64> = (0..samples).map(|i| x * (0.5 + 0.5 * i as f64 / (samples - 1) as f64)).collect();
        let scale = x;
        let a = DMatrix::from_fn(samples, 3, |i, j| (ws[i] / scale).powi(3 - j as i32));
        let b = DVector::from_iterator(samples, ws.iter().map(|&w| count_at(w) / scale.powi(3)));
        let counting = match a.clone().svd(true, true).solve(&b, 1e-14) {
            Ok(c) => [c[0], c[1] * scale, c[2] * scale * scale],
            Err(_) => [density / 3.0, 0.0, 0.0],
        };
        let fluctuation = ws
            .iter()
            .map(|&w| (count_at(w) - (counting[0] * w.powi(3) + counting[1] * w * w + counting[2] * w)).abs())
            .fold(0.0, f64::max);
        Self { cutoff: x, density, counting, fluctuation }
    }

    /// Bound on `Σ_{ω > X} e^{−tω²}` from `∫_X^∞ c ω² e^{−tω²} dω`.
    pub fn heat_bound(&self, t: f64) -> f64 {
        let x = self.cutoff;
        let e = (-t * x * x).exp();
        self.density * (x * e / (2.0 * t) + e / (4.0 * t * t * x))
    }

    /// `∫_X^∞ ρ(ω) (ω² + μ)^{−2} dω` with `ρ = N'` from the cubic fit, and an
    /// error bound from the counted fluctuation around it.
    pub fn resolvent_tail(&self, mu: f64) -> (f64, f64) {
        let x = self.cutoff;
        let r = mu.sqrt();
        let d = x * x + mu;
        let rest = (r / x).atan();
        let i2 = x / (2.0 * d) + rest / (2.0 * r);
        let i1 = 1.0 / (2.0 * d);
        let i0 = rest / (2.0 * mu * r) - x / (2.0 * mu * d);
        let [a, b, c] = self.counting;
        let correction = 3.0 * a * i2 + 2.0 * b * i1 + c * i0;
        // |∫ (N − N_s) w'| with |N − N_s| ≤ D (ω/X)² beyond the window.
        let by_parts = 1.0 / (d * d) + 2.0 / (x * x) * (1.0 / d - mu / (2.0 * d * d));
        (correction, self.fluctuation * by_parts)
    }
}

/// `K(t) = Σ mult·e^{−tλ}` together with its truncation bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceSample {
    pub t: f64,
    pub value: f64,
    pub bound: f64,
}

/// Heat trace of a mode list at `t`. Fails when the truncation bound
/// exceeds `rtol·K(t)`, reporting the smallest usable `t`.
pub fn heat_trace<T: Real>(modes: &ModeList<T>, t: T, rtol: f64) -> Result<TraceSample> {
    let tail = TailModel::calibrate(modes);
    heat_trace_with(modes, &tail, t, rtol)
}

/// [`heat_trace`] on a grid, calibrating the tail model once.
pub fn heat_trace_series<T: Real>(modes: &ModeList<T>, ts: &[T], rtol: f64) -> Result<Vec<TraceSample>> {
    let tail = TailModel::calibrate(modes);
    ts.iter().map(|&t| heat_trace_with(modes, &tail, t, rtol)).collect()
}

/// Smallest `t` at which the truncation bound is at most `rtol·K(t)`.
pub fn min_heat_t<T: Real>(modes: &ModeList<T>, rtol: f64) -> f64 {
    let tail = TailModel::calibrate(modes);
    min_heat_t_with(modes, &tail, rtol)
}

fn heat_trace_with<T: Real>(modes: &ModeList<T>, tail: &TailModel, t: T, rtol: f64) -> Result<TraceSample> {
    if !(t > T::zero()) {
        return Err(Error::InvalidInput(format!("heat trace needs t > 0, got {t}")));
    }
    let value = raw_heat_trace(modes, t);
    let bound = tail.heat_bound(t.to_f64_lossy());
    let sample = TraceSample { t: t.to_f64_lossy(), value: value.to_f64_lossy(), bound };
    if bound > rtol * sample.value {
        return Err(Error::CutoffTooLow { parameter: "t", requested: sample.t, minimum: min_heat_t_with(modes, tail, rtol) });
    }
    Ok(sample)
}

fn raw_heat_trace<T: Real>(modes: &ModeList<T>, t: T) -> T {
    let mut acc = CompensatedSum::new();
    for e in modes.entries() {
        acc.add(T::from_u32(e.multiplicity).unwrap_or_else(T::zero) * (-t * e.lambda).exp());
    }
    acc.value()
}

fn min_heat_t_with<T: Real>(modes: &ModeList<T>, tail: &TailModel, rtol: f64) -> f64 {
    let ok = |t: f64| tail.heat_bound(t) <= rtol * raw_heat_trace(modes, T::lit(t)).to_f64_lossy();
    let (mut lo, mut hi) = (1e-12_f64, 1.0_f64);
    while !ok(hi) && hi < 1e12 {
        hi *= 4.0;
    }
    if ok(lo) {
        return lo;
    }
    for _ in 0..80 {
        let mid = (lo * hi).sqrt();
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi / lo < 1.0 + 1e-10 {
            break;
        }
    }
    hi
}

/// `T₂(μ) = Σ mult·(λ + μ)^{−2}`, with the part beyond the cutoff added
/// from the smooth counting model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResolventSample {
    pub mu: f64,
    pub value: f64,
    pub tail_correction: f64,
    pub bound: f64,
}

/// Fails when the bound on the tail correction exceeds `rtol·T₂(μ)`.
pub fn resolvent2_trace<T: Real>(modes: &ModeList<T>, mu: T, rtol: f64) -> Result<ResolventSample> {
    if !(mu > T::zero()) {
        return Err(Error::InvalidInput(format!("resolvent trace needs mu > 0, got {mu}")));
    }
    let mut acc = CompensatedSum::new();
    for e in modes.entries() {
        let d = e.lambda + mu;
        acc.add(T::from_u32(e.multiplicity).unwrap_or_else(T::zero) / (d * d));
    }
    let tail = TailModel::calibrate(modes);
    let (correction, bound) = tail.resolvent_tail(mu.to_f64_lossy());
    let value = acc.value().to_f64_lossy() + correction;
    if bound > rtol * value {
        let x = tail.cutoff;
        return Err(Error::CutoffTooLow {
            parameter: "omega_max",
            requested: x,
            minimum: x * (bound / (rtol * value)).sqrt(),
        });
    }
    Ok(ResolventSample { mu: mu.to_f64_lossy(), value, tail_correction: correction, bound })
}

/// Relative deviation of `N(ω)` from the leading Weyl term
/// `k·|Ω| ω³ / (6π²)`, `k` the number of families in the list.
pub fn weyl_deviation<T: Real>(modes: &ModeList<T>, omega: T) -> f64 {
    let r = modes.radius().to_f64_lossy();
    let w = omega.to_f64_lossy();
    let volume = 4.0 / 3.0 * std::f64::consts::PI * r.powi(3);
    let k = modes.families().len() as f64;
    let weyl = k * volume * w.powi(3) / (6.0 * std::f64::consts::PI.powi(2));
    (modes.counting_function(omega) as f64 - weyl) / weyl
}
