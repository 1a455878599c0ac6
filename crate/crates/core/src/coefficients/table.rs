//! Exact coefficient data: the p-form c-table, the prefactors, and the
//! local parts of the electromagnetic coefficients, as rational linear forms
//! in the geometric moments with a symbolic power of `4π`.

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::moments::{GeometricMoments, Moment};
use crate::geometry::Integral;
use crate::Real;

pub type Q = Ratio<i64>;

pub(crate) fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

/// Row labels of the c-table in order.
pub const C_ROWS: [&str; 11] = ["c0", "c1", "c2", "c31", "c32", "c41", "c42", "c51", "c52", "c53", "c54"];

/// The c-table, columns `p = 0, 1, 2, 3`.
pub const C_TABLE: [[i64; 4]; 11] = [
    [1, 3, 3, 1],
    [-1, -1, 1, 1],
    [1, -3, -3, 1],
    [3, 21, 33, 15],
    [-20, 148, -220, -4],
    [4, 36, 60, 28],
    [-18, -162, -186, -42],
    [555, 5145, 8625, 4035],
    [-2840, -27720, -35720, -10840],
    [2224, 29072, 29712, 2864],
    [120, 2520, 4680, 2280],
];

/// Rational prefactors of `a₀ … a₅` in the p-form formulas.
pub fn form_prefactor(n: usize) -> Q {
    [q(1, 1), q(1, 4), q(1, 3), q(1, 384), q(1, 315), q(1, 245760)][n]
}

/// Exponent of `4π` in `aₙ`, in halves: `−3` for even `n`, `−2` for odd.
pub fn four_pi_half_power(n: usize) -> i32 {
    if n % 2 == 0 {
        -3
    } else {
        -2
    }
}

/// Rows of the c-table entering `aₙ`, paired with their moments.
fn rows_for(n: usize) -> &'static [(usize, Moment)] {
    match n {
        0 => &[(0, Moment::Volume)],
        1 => &[(1, Moment::Area)],
        2 => &[(2, Moment::TrL)],
        3 => &[(3, Moment::TrL2), (4, Moment::DetL)],
        4 => &[(5, Moment::TrL3), (6, Moment::TrLDetL)],
        _ => &[(7, Moment::TrL4), (8, Moment::TrL2DetL), (9, Moment::DetL2), (10, Moment::TrLLapTrL)],
    }
}

/// `(4π)^{h/2} Σ cₘ · moment_m` with exact rational `cₘ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearForm {
    pub four_pi_half_power: i32,
    pub coeffs: [Q; 11],
}

impl LinearForm {
    pub fn zero(four_pi_half_power: i32) -> Self {
        Self { four_pi_half_power, coeffs: [Q::zero(); 11] }
    }

    pub fn with(mut self, m: Moment, c: Q) -> Self {
        self.coeffs[m.index()] += c;
        self
    }

    pub fn get(&self, m: Moment) -> Q {
        self.coeffs[m.index()]
    }

    /// `self − other`; both must carry the same power of `4π`.
    pub fn sub(&self, other: &LinearForm) -> LinearForm {
        assert_eq!(self.four_pi_half_power, other.four_pi_half_power);
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(other.coeffs) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, s: Q) -> LinearForm {
        LinearForm { four_pi_half_power: self.four_pi_half_power, coeffs: self.coeffs.map(|c| c * s) }
    }

    /// Numerical value on moments, with a first-order error bound.
    pub fn evaluate<T: Real>(&self, moments: &GeometricMoments<T>) -> Integral<T> {
        let four_pi = T::lit(4.0) * T::PI();
        let pref = four_pi.powf(T::lit(self.four_pi_half_power as f64 / 2.0));
        let mut value = T::zero();
        let mut error = T::zero();
        for m in Moment::ALL {
            let c = self.coeffs[m.index()];
            if c.is_zero() {
                continue;
            }
            let cf = T::lit(c.to_f64().unwrap_or(f64::NAN));
            value = value + cf * moments.get(m);
            error = error + cf.abs() * moments.error(m);
        }
        Integral { value: value * pref, error: error * pref }
    }
}

/// Local part of `aₙ^{(p)}`.
pub fn form_local(p: usize, n: usize) -> LinearForm {
    assert!(p <= 3 && n <= 5);
    let pre = form_prefactor(n);
    let mut f = LinearForm::zero(four_pi_half_power(n));
    for &(row, m) in rows_for(n) {
        f = f.with(m, pre * Q::from_integer(C_TABLE[row][p]));
    }
    f
}

/// Local part of the electromagnetic `aₙ`, entered independently of the
/// c-table.
pub fn em_local(n: usize) -> LinearForm {
    let f = LinearForm::zero(four_pi_half_power(n));
    match n {
        0 => f.with(Moment::Volume, q(2, 1)),
        1 => f,
        2 => f.with(Moment::TrL, q(-4, 3)),
        3 => f.with(Moment::TrL2, q(3, 64)).with(Moment::DetL, q(-4, 64)),
        4 => f.with(Moment::TrL3, q(32, 315)).with(Moment::TrLDetL, q(-144, 315)),
        5 => {
            let p = q(1, 122880);
            f.with(Moment::TrL4, p * 2295)
                .with(Moment::TrL2DetL, p * -12440)
                .with(Moment::DetL2, p * 13424)
                .with(Moment::TrLLapTrL, p * 1200)
        }
        _ => panic!("coefficient index {n} out of range"),
    }
}

/// Topological part `α·n + β·Σgᵢ + γ` of an `a₃` expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TopologicalPart {
    pub per_component: Q,
    pub per_genus: Q,
    pub constant: Q,
}

impl TopologicalPart {
    pub fn evaluate(&self, components: i64, total_genus: i64) -> Q {
        self.per_component * components + self.per_genus * total_genus + self.constant
    }
}

/// Non-local part of the electromagnetic `a₃`: `−½ Σ(1 + gᵢ) + 1`.
pub fn em_a3_nonlocal() -> TopologicalPart {
    TopologicalPart { per_component: q(-1, 2), per_genus: q(-1, 2), constant: q(1, 1) }
}

/// Dimensions of harmonic p-forms `{0, n − 1, Σgᵢ, 1}` for `p = 0..3`.
pub fn harmonic_dims() -> [TopologicalPart; 4] {
    let z = Q::zero();
    let one = q(1, 1);
    [
        TopologicalPart { per_component: z, per_genus: z, constant: z },
        TopologicalPart { per_component: one, per_genus: z, constant: -one },
        TopologicalPart { per_component: z, per_genus: one, constant: z },
        TopologicalPart { per_component: z, per_genus: z, constant: one },
    ]
}

pub fn harmonic_dims_for(components: usize, total_genus: u64) -> [u64; 4] {
    [0, components as u64 - 1, total_genus, 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefactors_and_powers() {
        assert_eq!(form_local(1, 3).get(Moment::TrL2), q(21, 384));
        assert_eq!(form_local(3, 5).get(Moment::TrLLapTrL), q(2280, 245760));
        assert_eq!(em_local(1), LinearForm::zero(-2));
        assert_eq!(four_pi_half_power(4), -3);
    }

    #[test]
    fn unit_ball_table_values() {
        let b = GeometricMoments::<f64>::ball(1.0);
        let v = |p, n| form_local(p, n).evaluate(&b).value;
        assert!((v(0, 1) + 0.25).abs() < 1e-15);
        assert!((v(1, 3) - 29.0 / 48.0).abs() < 1e-15);
        assert!((v(3, 3) - 7.0 / 48.0).abs() < 1e-15);
        assert!((v(0, 3) + 1.0 / 48.0).abs() < 1e-15);
        assert!((v(2, 3) + 11.0 / 48.0).abs() < 1e-15);
    }
}
