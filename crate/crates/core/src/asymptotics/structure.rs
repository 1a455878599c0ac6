use num_traits::{FromPrimitive, Num};
use serde::Serialize;

use super::fit::gamma_half;
use crate::coefficients::{delta_a3, DeltaA3, HeatCoefficientSet};
use crate::error::{Error, Result};
use crate::geometry::TopologyInfo;
use crate::Real;

/// `Φ(k) ≐ c₃ i k³ + c_L k² ln(−k²) + c₁ i k + c₀ + O(k⁻¹)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiExpansion {
    pub ik3: f64,
    pub k2_log: f64,
    pub ik: f64,
    pub constant: f64,
    pub convention: &'static str,
}

pub const PHI_CONVENTION: &str =
    "equality modulo a polynomial in k^2; the constant term is convention dependent and reported as -a3";

/// Large-`k` expansion of the phase `Φ(k)` from `a₀ … a₃`.
pub fn phi_expansion<T: Real>(a: &HeatCoefficientSet<T>) -> PhiExpansion {
    let sp = std::f64::consts::PI.sqrt();
    let v = |n: usize| a.values[n].to_f64_lossy();
    PhiExpansion { ik3: 2.0 * sp * v(0), k2_log: -sp * v(1), ik: sp * v(2), constant: -v(3), convention: PHI_CONVENTION }
}

/// `Σ_{n≤5} Γ((n+1)/2) aₙ μ^{−(n+1)/2}` and the size of its last term,
/// used as the estimate of what the truncation of the series omits.
pub fn resolvent_expansion<T: Real>(a: &HeatCoefficientSet<T>, mu: f64) -> (f64, f64) {
    let terms: Vec<f64> = (0..6)
        .map(|n| gamma_half(n + 1) * a.values[n].to_f64_lossy() * mu.powf(-(n as f64 + 1.0) / 2.0))
        .collect();
    (terms.iter().sum(), terms[5].abs() / mu.sqrt())
}

/// Heat-trace prediction `Σ_{n≤5} aₙ t^{(n−3)/2}` and the last-term
/// estimate of the omitted order.
pub fn heat_expansion<T: Real>(a: &HeatCoefficientSet<T>, t: f64) -> (f64, f64) {
    let terms: Vec<f64> = (0..6).map(|n| a.values[n].to_f64_lossy() * t.powf((n as f64 - 3.0) / 2.0)).collect();
    (terms.iter().sum(), terms[5].abs() * t.sqrt())
}

/// Number of extra finite-frequency modes created by a conducting surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeCountReport<F> {
    pub a3_local: F,
    pub genus: u32,
    /// Low-frequency limit of the scattering phase, imported as `−g`.
    pub psi_zero: F,
    /// Constant term of `δΦ`: `−2ã₃`.
    pub delta_phi_constant: F,
    /// `C = ψ(0+) − ψ(∞) = 2ã₃ − g`, with `ψ(∞) = 0`.
    pub count: F,
    /// `δa₃` assembled independently by the coefficient tables.
    pub delta_a3: F,
    pub consistent: bool,
}

/// `C = 2ã₃ − g` for a connected surface, cross-checked against `δa₃`.
pub fn mode_count<F: Num + Copy + FromPrimitive + PartialEq>(a3_local: F, topology: &TopologyInfo) -> Result<ModeCountReport<F>> {
    if topology.components != 1 {
        return Err(Error::Unsupported(format!("mode count needs a connected surface, got {} components", topology.components)));
    }
    let g = topology.genera[0];
    let gf = F::from_u32(g).ok_or_else(|| Error::InvalidInput("genus not representable".into()))?;
    let two = F::one() + F::one();
    let count = two * a3_local - gf;
    let DeltaA3 { delta_a3, .. } = delta_a3(a3_local, topology)?;
    Ok(ModeCountReport {
        a3_local,
        genus: g,
        psi_zero: F::zero() - gf,
        delta_phi_constant: F::zero() - two * a3_local,
        count,
        delta_a3,
        consistent: count == delta_a3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{a3_local_exact, CoefficientKind, Provenance, Q};

    #[test]
    fn ball_count_is_a_quarter_exactly() {
        let a3 = a3_local_exact(Q::from_integer(4), Q::from_integer(1));
        assert_eq!(a3, Q::new(1, 8));
        let r = mode_count(a3, &TopologyInfo::connected(0)).unwrap();
        assert_eq!(r.count, Q::new(1, 4));
        assert!(r.consistent);
    }

    #[test]
    fn count_vanishes_when_genus_matches() {
        let r = mode_count(Q::new(1, 2), &TopologyInfo::connected(1)).unwrap();
        assert_eq!(r.count, Q::from_integer(0));
        assert!(r.consistent);
        assert!(mode_count(Q::new(1, 2), &TopologyInfo::new(vec![0, 0]).unwrap()).is_err());
    }

    #[test]
    fn phi_for_the_ball() {
        let sp = std::f64::consts::PI.sqrt();
        let a = HeatCoefficientSet::exact(
            CoefficientKind::Em,
            [1.0 / (3.0 * sp), 0.0, -4.0 / (3.0 * sp), 0.625, 0.0, 0.0],
            Provenance::ClosedForm,
        );
        let phi = phi_expansion(&a);
        assert_eq!(phi.constant, -0.625);
        assert_eq!(phi.k2_log, 0.0);
        assert!((phi.ik + 4.0 / 3.0).abs() < 1e-15);
    }
}
