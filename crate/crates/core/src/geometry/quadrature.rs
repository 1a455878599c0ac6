//! Tensor-product quadrature over chart rectangles: Gauss–Legendre in
//! bounded directions, the trapezoid rule in periodic ones.

use serde::{Deserialize, Serialize};

use super::chart::SurfaceChart;
use super::curvature::{curvature_at_with, CurvatureOptions, CurvatureSample};
use super::model::SurfaceModel;
use crate::error::{Error, Result};
use crate::sum::CompensatedSum;
use crate::Real;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    let mut x = vec![T::zero(); n];
    let mut w = vec![T::zero(); n];
    let nf = T::from_usize_lossy(n);
    let half = (n + 1) / 2;
    for i in 0..half {
        let mut z = (T::PI() * (T::from_usize_lossy(i) + T::lit(0.75)) / (nf + T::lit(0.5))).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre(n, z);
            dp = d;
            let dz = p / d;
            z = z - dz;
            if dz.abs() <= T::epsilon() * T::lit(4.0) {
                break;
            }
        }
        let (_, d) = legendre(n, z);
        if d.is_finite() {
            dp = d;
        }
        let wi = T::lit(2.0) / ((T::one() - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = T::zero();
    }
    (x, w)
}

/// `(P_n(z), P_n'(z))` by the three-term recurrence.
fn legendre<T: Real>(n: usize, z: T) -> (T, T) {
    let (mut p0, mut p1) = (T::one(), z);
    if n == 0 {
        return (p0, T::zero());
    }
    for k in 2..=n {
        let kf = T::from_usize_lossy(k);
        let p2 = ((kf + kf - T::one()) * z * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = T::from_usize_lossy(n);
    (p1, nf * (z * p1 - p0) / (z * z - T::one()))
}

/// Nodes and weights for one chart direction.
pub fn rule_1d<T: Real>((a, b): (T, T), periodic: bool, n: usize) -> (Vec<T>, Vec<T>) {
    let width = b - a;
    if periodic {
        let h = width / T::from_usize_lossy(n);
        ((0..n).map(|k| a + h * T::from_usize_lossy(k)).collect(), vec![h; n])
    } else {
        let (x, w) = gauss_legendre::<T>(n);
        let half = width / T::lit(2.0);
        let mid = a + half;
        (x.into_iter().map(|t| mid + half * t).collect(), w.into_iter().map(|t| t * half).collect())
    }
}

/// Node counts per chart direction, plus the refinement factor used for
/// the error estimate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub default_nodes: [usize; 2],
    /// Overrides for individual charts, in model order.
    pub per_chart: Vec<Option<[usize; 2]>>,
    pub refinement: usize,
}

impl QuadratureSpec {
    pub fn uniform(order: usize) -> Self {
        Self { default_nodes: [order, order], per_chart: Vec::new(), refinement: 2 }
    }

    pub fn nodes_for(&self, chart_index: usize) -> [usize; 2] {
        self.per_chart.get(chart_index).copied().flatten().unwrap_or(self.default_nodes)
    }

    pub fn validate(&self) -> Result<()> {
        let all = std::iter::once(self.default_nodes).chain(self.per_chart.iter().flatten().copied());
        for n in all {
            if n[0] < 4 || n[1] < 4 {
                return Err(Error::Quadrature(format!("node counts {n:?} below 4")));
            }
        }
        if self.refinement < 2 {
            return Err(Error::Quadrature(format!("refinement factor {} below 2", self.refinement)));
        }
        Ok(())
    }

    fn refined(&self) -> Self {
        let r = self.refinement;
        Self {
            default_nodes: self.default_nodes.map(|n| n * r),
            per_chart: self.per_chart.iter().map(|o| o.map(|n| n.map(|k| k * r))).collect(),
            refinement: r,
        }
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self::uniform(32)
    }
}

/// A quadrature result: the refined value and `|refined − coarse|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Integral<T> {
    pub value: T,
    pub error: T,
}

impl<T: Real> Integral<T> {
    pub fn exact(value: T) -> Self {
        Self { value, error: T::zero() }
    }

    pub fn scale(self, s: T) -> Self {
        Self { value: self.value * s, error: self.error * s.abs() }
    }
}

fn integrate_once<T: Real, const N: usize, F>(
    model: &SurfaceModel<T>,
    quad: &QuadratureSpec,
    options: CurvatureOptions,
    f: &F,
) -> Result<[T; N]>
where
    F: Fn(&CurvatureSample<T>) -> [T; N],
{
    let mut acc: [CompensatedSum<T>; N] = std::array::from_fn(|_| CompensatedSum::new());
    for (ci, chart) in model.charts().enumerate() {
        let d = chart.domain();
        let [nu, nv] = quad.nodes_for(ci);
        let (us, wu) = rule_1d(d.u, d.periodic[0], nu);
        let (vs, wv) = rule_1d(d.v, d.periodic[1], nv);
        for (&u, &a) in us.iter().zip(&wu) {
            for (&v, &b) in vs.iter().zip(&wv) {
                let s = curvature_at_with(chart.as_ref(), u, v, options)?;
                let vals = f(&s);
                let w = a * b * s.area_element;
                for (k, x) in vals.into_iter().enumerate() {
                    if !x.is_finite() {
                        return Err(Error::NonFinite { what: "integrand", u: u.to_f64_lossy(), v: v.to_f64_lossy() });
                    }
                    acc[k].add(w * x);
                }
            }
        }
    }
    Ok(acc.map(|s| s.value()))
}

/// Integrates several curvature-dependent fields over the whole boundary
/// in one pass, at the given spec and at its refinement.
pub fn surface_integrals<T: Real, const N: usize, F>(
    model: &SurfaceModel<T>,
    quad: &QuadratureSpec,
    options: CurvatureOptions,
    f: F,
) -> Result<[Integral<T>; N]>
where
    F: Fn(&CurvatureSample<T>) -> [T; N],
{
    quad.validate()?;
    let coarse = integrate_once(model, quad, options, &f)?;
    let fine = integrate_once(model, &quad.refined(), options, &f)?;
    Ok(std::array::from_fn(|k| Integral { value: fine[k], error: (fine[k] - coarse[k]).abs() }))
}

pub fn surface_integral<T: Real, F>(model: &SurfaceModel<T>, quad: &QuadratureSpec, f: F) -> Result<Integral<T>>
where
    F: Fn(&CurvatureSample<T>) -> T,
{
    let [r] = surface_integrals(model, quad, CurvatureOptions::default(), |s| [f(s)])?;
    Ok(r)
}

/// `|Ω| = −⅓ ∮ x·n dσ` with `n` the inward normal.
pub fn enclosed_volume<T: Real>(model: &SurfaceModel<T>, quad: &QuadratureSpec) -> Result<Integral<T>> {
    let third = T::one() / T::lit(3.0);
    let vol = surface_integral(model, quad, |s| -s.point.dot(s.normal) * third)?;
    if !(vol.value > T::zero()) {
        return Err(Error::Orientation { volume: vol.value.to_f64_lossy() });
    }
    Ok(vol)
}

/// `∮ |∇ tr L|² dσ`.
pub fn grad_tr_l_sq_integral<T: Real>(model: &SurfaceModel<T>, quad: &QuadratureSpec) -> Result<Integral<T>> {
    surface_integral(model, quad, |s| s.grad_tr_l_sq())
}

/// `∮ tr L ∇² tr L dσ` from pointwise Laplacians. Needs fourth embedding
/// derivatives unless the finite-difference fallback is enabled.
pub fn tr_l_lap_tr_l_integral<T: Real>(
    model: &SurfaceModel<T>,
    quad: &QuadratureSpec,
    options: CurvatureOptions,
) -> Result<Integral<T>> {
    if !options.laplacian_fallback {
        if let Some(c) = model.charts().find(|c| c.max_order() < 4) {
            return Err(Error::MissingDerivatives {
                what: "pointwise Laplacian of tr L",
                required: 4,
                available: c.max_order(),
            });
        }
    }
    let [r] = surface_integrals(model, quad, options, |s| [s.tr_l * s.lap_tr_l.unwrap_or(T::nan())])?;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in [4usize, 7, 32, 64] {
            let (x, w) = gauss_legendre::<f64>(n);
            let total: f64 = w.iter().sum();
            assert!((total - 2.0).abs() < 1e-14);
            let deg = 2 * n - 2;
            let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
            assert!((m - 2.0 / (deg as f64 + 1.0)).abs() < 1e-13, "n = {n}");
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn single_precision_nodes() {
        let (_, w) = gauss_legendre::<f32>(16);
        assert!((w.iter().sum::<f32>() - 2.0).abs() < 1e-5);
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::uniform(3).validate().is_err());
        let mut q = QuadratureSpec::uniform(8);
        q.refinement = 1;
        assert!(q.validate().is_err());
    }
}
