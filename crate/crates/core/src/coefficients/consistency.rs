//! The relations between the electromagnetic and p-form coefficients,
//! checked exactly on the tables and numerically on moments.

use num_traits::Zero;
use serde::Serialize;

use super::moments::{GeometricMoments, Moment};
use super::sets::{em_coefficients, form_coefficients};
use super::table::{em_a3_nonlocal, em_local, form_local, harmonic_dims, q, LinearForm, TopologicalPart, Q};
use crate::error::Result;
use crate::geometry::TopologyInfo;
use crate::Real;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationCheck {
    pub name: String,
    pub passed: bool,
    /// Human-readable residual: exact rational for table relations.
    pub residual: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub relations: Vec<RelationCheck>,
}

impl ConsistencyReport {
    pub fn all_passed(&self) -> bool {
        self.relations.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationCheck> {
        self.relations.iter().filter(|r| !r.passed)
    }
}

fn describe(f: &LinearForm) -> String {
    let terms: Vec<String> = Moment::ALL
        .iter()
        .filter(|m| !f.get(**m).is_zero())
        .map(|m| format!("{}*{}", f.get(*m), m.label()))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// `a₃` as `(4π)^{-1}(α (tr L)² + β det L)[∂Ω] + topological part`, with
/// Gauss–Bonnet `(4π)^{-1}(det L)[∂Ω] = n − Σgᵢ` substituted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct ReducedA3 {
    tr_l2: Q,
    topo: TopologicalPart,
}

fn reduce(local: &LinearForm, mut topo: TopologicalPart) -> ReducedA3 {
    let beta = local.get(Moment::DetL);
    topo.per_component += beta;
    topo.per_genus -= beta;
    ReducedA3 { tr_l2: local.get(Moment::TrL2), topo }
}

fn neg_topo(t: TopologicalPart) -> TopologicalPart {
    TopologicalPart { per_component: -t.per_component, per_genus: -t.per_genus, constant: -t.constant }
}

fn add_topo(a: TopologicalPart, b: TopologicalPart) -> TopologicalPart {
    TopologicalPart {
        per_component: a.per_component + b.per_component,
        per_genus: a.per_genus + b.per_genus,
        constant: a.constant + b.constant,
    }
}

/// Exact table relations. Every check is an identity in rational
/// arithmetic; the topology only enters the instantiated `a₃` lines.
pub fn consistency_report(topology: &TopologyInfo) -> ConsistencyReport {
    let mut relations = Vec::new();
    let mut push = |name: String, lhs: &LinearForm, rhs: &LinearForm| {
        let d = lhs.sub(rhs);
        relations.push(RelationCheck {
            name,
            passed: d.coeffs.iter().all(|c| c.is_zero()),
            residual: describe(&d),
        });
    };
    for n in [0usize, 1, 2, 4, 5] {
        push(format!("a{n} = a{n}(1) - a{n}(0)"), &em_local(n), &form_local(1, n).sub(&form_local(0, n)));
        push(format!("a{n} = a{n}(2) - a{n}(3)"), &em_local(n), &form_local(2, n).sub(&form_local(3, n)));
    }

    let d10 = form_local(1, 3).sub(&form_local(0, 3));
    let d23 = form_local(2, 3).sub(&form_local(3, 3));
    let line = |beta: i64| LinearForm::zero(-2).with(Moment::TrL2, q(3, 64)).with(Moment::DetL, q(beta, 64));
    push("a3(1) - a3(0) = (1/64)(4pi)^-1 (3(tr L)^2 + 28 det L)".into(), &d10, &line(28));
    push("a3(2) - a3(3) = (1/64)(4pi)^-1 (3(tr L)^2 - 36 det L)".into(), &d23, &line(-36));

    let h = harmonic_dims();
    let em_a3 = reduce(&em_local(3), em_a3_nonlocal());
    let routes = [
        ("a3 = a3(1) - a3(0) - n + 1 (Gauss-Bonnet)", reduce(&d10, neg_topo(add_topo(h[1], neg_topo(h[0]))))),
        ("a3 = a3(2) - a3(3) - sum g + 1 (Gauss-Bonnet)", reduce(&d23, neg_topo(add_topo(h[2], neg_topo(h[3]))))),
    ];
    let (n, g) = (topology.components as i64, topology.total_genus() as i64);
    for (name, r) in routes {
        let exact = r == em_a3;
        relations.push(RelationCheck {
            name: name.into(),
            passed: exact,
            residual: format!(
                "(tr L)^2: {}, n: {}, sum g: {}, const: {}",
                r.tr_l2 - em_a3.tr_l2,
                r.topo.per_component - em_a3.topo.per_component,
                r.topo.per_genus - em_a3.topo.per_genus,
                r.topo.constant - em_a3.topo.constant
            ),
        });
        let inst = r.topo.evaluate(n, g) - em_a3.topo.evaluate(n, g);
        relations.push(RelationCheck {
            name: format!("{name} at n = {n}, sum g = {g}"),
            passed: inst.is_zero() && r.tr_l2 == em_a3.tr_l2,
            residual: inst.to_string(),
        });
    }
    relations.push(RelationCheck {
        name: "em a1 = 0 (c1 differences vanish)".into(),
        passed: C1_DIFFS.iter().all(|d| d.is_zero())
            && em_local(1).coeffs.iter().all(|c| c.is_zero()),
        residual: format!("{}, {}", C1_DIFFS[0], C1_DIFFS[1]),
    });
    ConsistencyReport { relations }
}

const C1_DIFFS: [Q; 2] = {
    use super::table::C_TABLE;
    [
        Q::new_raw(C_TABLE[1][1] - C_TABLE[1][0], 1),
        Q::new_raw(C_TABLE[1][2] - C_TABLE[1][3], 1),
    ]
};

/// `(det L)[∂Ω] − 4π Σ(1 − gᵢ)` and its quadrature error.
pub fn gauss_bonnet_residual<T: Real>(moments: &GeometricMoments<T>, topology: &TopologyInfo) -> (T, T) {
    let expected = T::lit(4.0) * T::PI() * T::lit(topology.euler_half() as f64);
    (moments.get(Moment::DetL) - expected, moments.error(Moment::DetL))
}

/// Largest deviation between the electromagnetic set and each p-form
/// difference route, with the combined moment error as tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NumericConsistency<T> {
    pub route_10: [T; 6],
    pub route_23: [T; 6],
    pub tolerance: [T; 6],
}

impl<T: Real> NumericConsistency<T> {
    pub fn passed(&self) -> bool {
        (0..6).all(|n| self.route_10[n].abs() <= self.tolerance[n] && self.route_23[n].abs() <= self.tolerance[n])
    }
}

pub fn numeric_consistency<T: Real>(moments: &GeometricMoments<T>, topology: &TopologyInfo) -> Result<NumericConsistency<T>> {
    let em = em_coefficients(moments, topology)?;
    let f: Vec<_> = (0..4).map(|p| form_coefficients(p, moments)).collect::<Result<_>>()?;
    let h = harmonic_dims();
    let (n, g) = (topology.components as i64, topology.total_genus() as i64);
    let corr = |a: TopologicalPart, b: TopologicalPart| {
        let x = a.evaluate(n, g) - b.evaluate(n, g);
        T::lit(-num_traits::ToPrimitive::to_f64(&x).unwrap_or(f64::NAN))
    };
    let mut out = NumericConsistency { route_10: [T::zero(); 6], route_23: [T::zero(); 6], tolerance: [T::zero(); 6] };
    // Gauss–Bonnet enters a₃, so the det L quadrature error does too.
    let gb = moments.error(Moment::DetL) / (T::lit(4.0) * T::PI());
    for k in 0..6 {
        let mut r10 = f[1].values[k] - f[0].values[k];
        let mut r23 = f[2].values[k] - f[3].values[k];
        if k == 3 {
            r10 = r10 + corr(h[1], h[0]);
            r23 = r23 + corr(h[2], h[3]);
        }
        out.route_10[k] = r10 - em.values[k];
        out.route_23[k] = r23 - em.values[k];
        let scale = em.values[k].abs().max(T::one());
        let err = em.errors[k] + f.iter().map(|s| s.errors[k]).fold(T::zero(), |a, b| a + b);
        let extra = if k == 3 { gb } else { T::zero() };
        out.tolerance[k] = T::lit(10.0) * (err + extra) + T::lit(64.0) * T::epsilon() * scale;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_exact_relations_hold() {
        for genera in [vec![0], vec![1], vec![2, 0, 3]] {
            let t = TopologyInfo::new(genera).unwrap();
            let r = consistency_report(&t);
            assert!(r.all_passed(), "{:#?}", r.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn transcription_error_is_caught() {
        let wrong = form_local(1, 4).with(Moment::TrL3, q(1, 315));
        assert_ne!(em_local(4), wrong.sub(&form_local(0, 4)));
    }

    #[test]
    fn quoted_k4_and_k5_lines() {
        use crate::coefficients::table::C_TABLE;
        assert_eq!(C_TABLE[5][1] - C_TABLE[5][0], 32);
        assert_eq!(C_TABLE[9][2] - C_TABLE[9][3], 2 * 13424);
    }

    #[test]
    fn unit_ball_routes_numerically() {
        let m = GeometricMoments::<f64>::ball(1.0);
        let c = numeric_consistency(&m, &TopologyInfo::connected(0)).unwrap();
        assert!(c.passed(), "{c:?}");
    }
}
