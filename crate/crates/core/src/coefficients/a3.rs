//! The local part `ã₃` of `a₃` and the change `δa₃` caused by inserting a
//! conducting surface into a larger cavity.

use num_traits::{FromPrimitive, Num};
use serde::Serialize;

use super::moments::{GeometricMoments, Moment};
use super::table::{em_a3_nonlocal, Q};
use crate::error::{Error, Result};
use crate::geometry::{Integral, TopologyInfo};
use crate::Real;

/// `ã₃ = (1/64)(4π)^{-1}(3(tr L)² − 4 det L)[∂Ω]`.
pub fn a3_local<T: Real>(moments: &GeometricMoments<T>) -> Integral<T> {
    let pre = T::one() / (T::lit(64.0) * T::lit(4.0) * T::PI());
    let (t2, d) = (moments.get(Moment::TrL2), moments.get(Moment::DetL));
    let err = T::lit(3.0) * moments.error(Moment::TrL2) + T::lit(4.0) * moments.error(Moment::DetL);
    Integral { value: pre * (T::lit(3.0) * t2 - T::lit(4.0) * d), error: pre * err }
}

/// `ã₃` with both moments given in units of `4π`; exact for rational input.
pub fn a3_local_exact(tr_l2_over_4pi: Q, det_l_over_4pi: Q) -> Q {
    (tr_l2_over_4pi * 3 - det_l_over_4pi * 4) / 64
}

/// The alternative form `(1/64)∮(¾(κ₁² + κ₂²) − κ₁κ₂)`, which differs from
/// [`a3_local`] by a factor involving `4π`. Reported for comparison only.
pub fn a3_local_kappa_variant<T: Real>(moments: &GeometricMoments<T>) -> Integral<T> {
    let (t2, d) = (moments.get(Moment::TrL2), moments.get(Moment::DetL));
    // κ₁² + κ₂² = (tr L)² − 2 det L
    let q34 = T::lit(0.75);
    let value = (q34 * t2 - T::lit(2.5) * d) / T::lit(64.0);
    let error = (q34 * moments.error(Moment::TrL2) + T::lit(2.5) * moments.error(Moment::DetL)) / T::lit(64.0);
    Integral { value, error }
}

/// Breakdown of `δa₃ = [a₃(Ω) + a₃(Ω₀∖Ω̄)] − a₃(Ω₀)` for a connected surface
/// of genus `g` inside a large ball `Ω₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaA3<F> {
    pub genus: u32,
    pub a3_local: F,
    /// Non-local parts of `a₃` for `Ω`, `Ω₀∖Ω̄` and `Ω₀`.
    pub nonlocal: [F; 3],
    pub delta_a3: F,
}

fn nonlocal<F: Num + Copy + FromPrimitive>(t: &TopologyInfo) -> F {
    let v: Q = em_a3_nonlocal().evaluate(t.components as i64, t.total_genus() as i64);
    F::from_i64(*v.numer()).expect("representable") / F::from_i64(*v.denom()).expect("representable")
}

/// Assembles `δa₃` from the doubled local part (the local integrand is even
/// in `L`, so both sides of the surface contribute `ã₃`) and the non-local
/// `a₃` terms of the three cavities.
pub fn delta_a3<F: Num + Copy + FromPrimitive>(a3_local: F, topology: &TopologyInfo) -> Result<DeltaA3<F>> {
    if topology.components != 1 {
        return Err(Error::Unsupported(format!(
            "delta a3 needs a connected surface, got {} components",
            topology.components
        )));
    }
    let g = topology.genera[0];
    let inner = nonlocal::<F>(&TopologyInfo::connected(g));
    let shell = nonlocal::<F>(&TopologyInfo { components: 2, genera: vec![g, 0] });
    let outer = nonlocal::<F>(&TopologyInfo::connected(0));
    let two = F::one() + F::one();
    Ok(DeltaA3 {
        genus: g,
        a3_local,
        nonlocal: [inner, shell, outer],
        delta_a3: two * a3_local + inner + shell - outer,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::table::q;

    #[test]
    fn ball_values() {
        let m = GeometricMoments::<f64>::ball(3.0);
        assert!((a3_local(&m).value - 0.125).abs() < 1e-15);
        let k = a3_local_kappa_variant(&GeometricMoments::<f64>::ball(1.0)).value;
        assert!((k - std::f64::consts::PI / 32.0).abs() < 1e-15);
        assert_eq!(a3_local_exact(q(4, 1), q(1, 1)), q(1, 8));
    }

    #[test]
    fn nonlocal_values_sum_to_minus_genus() {
        for g in 0..5u32 {
            let d = delta_a3(q(0, 1), &TopologyInfo::connected(g)).unwrap();
            let gq = q(g as i64, 1);
            assert_eq!(d.nonlocal, [-(gq - 1) / 2, -gq / 2, q(1, 2)]);
            assert_eq!(d.delta_a3, -gq);
        }
    }

    #[test]
    fn ball_delta_is_one_quarter() {
        let d = delta_a3(q(1, 8), &TopologyInfo::connected(0)).unwrap();
        assert_eq!(d.delta_a3, q(1, 4));
        let d = delta_a3(q(1, 2), &TopologyInfo::connected(1)).unwrap();
        assert_eq!(d.delta_a3, q(0, 1));
        assert!(delta_a3(0.1_f64, &TopologyInfo::new(vec![0, 0]).unwrap()).is_err());
    }
}
