use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::moments::{GeometricMoments, Moment};
use super::table::{em_a3_nonlocal, em_local, form_local};
use crate::error::{Error, Result};
use crate::geometry::TopologyInfo;
use crate::Real;

/// Which spectral problem a coefficient set belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "p", rename_all = "snake_case")]
pub enum CoefficientKind {
    Em,
    Form(u8),
}

impl std::fmt::Display for CoefficientKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CoefficientKind::Em => write!(f, "em"),
            CoefficientKind::Form(p) => write!(f, "form_{p}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ClosedForm,
    Quadrature,
    SpectralFit,
}

/// `a₀ … a₅` of `Σ aₙ t^{(n−3)/2}`; `aₙ` carries length^{3−n}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatCoefficientSet<T> {
    pub kind: CoefficientKind,
    pub values: [T; 6],
    pub errors: [T; 6],
    pub provenance: Provenance,
}

impl<T: Real> HeatCoefficientSet<T> {
    pub fn exact(kind: CoefficientKind, values: [T; 6], provenance: Provenance) -> Self {
        Self { kind, values, errors: [T::zero(); 6], provenance }
    }

    /// Coefficients of the cavity dilated by `s`: `aₙ → s^{3−n} aₙ`.
    pub fn scaled(&self, s: T) -> Self {
        let mut out = *self;
        for n in 0..6 {
            let f = s.powi(3 - n as i32);
            out.values[n] = out.values[n] * f;
            out.errors[n] = out.errors[n] * f.abs();
        }
        out
    }
}

fn provenance_of<T: Real>(m: &GeometricMoments<T>) -> Provenance {
    if Moment::ALL.iter().all(|&k| m.error(k) == T::zero()) {
        Provenance::ClosedForm
    } else {
        Provenance::Quadrature
    }
}

/// The electromagnetic coefficients from boundary curvature integrals and
/// the boundary topology.
pub fn em_coefficients<T: Real>(moments: &GeometricMoments<T>, topology: &TopologyInfo) -> Result<HeatCoefficientSet<T>> {
    topology.validate()?;
    let mut values = [T::zero(); 6];
    let mut errors = [T::zero(); 6];
    for n in [0usize, 2, 3, 4, 5] {
        let r = em_local(n).evaluate(moments);
        values[n] = r.value;
        errors[n] = r.error;
    }
    let nonlocal = em_a3_nonlocal().evaluate(topology.components as i64, topology.total_genus() as i64);
    values[3] = values[3] + T::lit(nonlocal.to_f64().unwrap_or(f64::NAN));
    Ok(HeatCoefficientSet { kind: CoefficientKind::Em, values, errors, provenance: provenance_of(moments) })
}

/// The p-form coefficients with relative boundary conditions, `p ∈ 0..=3`.
pub fn form_coefficients<T: Real>(p: usize, moments: &GeometricMoments<T>) -> Result<HeatCoefficientSet<T>> {
    if p > 3 {
        return Err(Error::InvalidInput(format!("form degree {p} outside 0..=3")));
    }
    let mut values = [T::zero(); 6];
    let mut errors = [T::zero(); 6];
    for n in 0..6 {
        let r = form_local(p, n).evaluate(moments);
        values[n] = r.value;
        errors[n] = r.error;
    }
    Ok(HeatCoefficientSet { kind: CoefficientKind::Form(p as u8), values, errors, provenance: provenance_of(moments) })
}
