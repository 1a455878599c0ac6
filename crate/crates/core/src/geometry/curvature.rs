//! Pointwise curvature of a chart: second fundamental form in an
//! orthonormal frame, principal curvatures, and surface derivatives of the
//! mean curvature trace `tr L`.

use serde::Serialize;

use super::chart::SurfaceChart;
use super::jet::Jet2;
use super::vec3::Vec3;
use crate::error::{Error, Result};
use crate::Real;

/// Curvature data at one surface point. `L` is expressed in the frame
/// `{e₁, e₂}` with the inward normal, so a convex cavity has `tr L > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureSample<T> {
    pub point: Vec3<T>,
    pub frame: [Vec3<T>; 2],
    pub normal: Vec3<T>,
    pub l: [[T; 2]; 2],
    pub tr_l: T,
    pub det_l: T,
    /// Principal curvatures, `κ₁ ≥ κ₂`.
    pub kappa: [T; 2],
    /// Frame components of the surface gradient of `tr L`.
    pub grad_tr_l: [T; 2],
    /// Laplace–Beltrami operator applied to `tr L`.
    pub lap_tr_l: Option<T>,
    /// `|r_u × r_v|`.
    pub area_element: T,
}

impl<T: Real> CurvatureSample<T> {
    pub fn grad_tr_l_sq(&self) -> T {
        self.grad_tr_l[0] * self.grad_tr_l[0] + self.grad_tr_l[1] * self.grad_tr_l[1]
    }

    /// Frobenius norm of `L² − (tr L) L + (det L) I`.
    pub fn cayley_hamilton_residual(&self) -> T {
        let l = self.l;
        let mut acc = T::zero();
        for i in 0..2 {
            for j in 0..2 {
                let sq = l[i][0] * l[0][j] + l[i][1] * l[1][j];
                let id = if i == j { self.det_l } else { T::zero() };
                let r = sq - self.tr_l * l[i][j] + id;
                acc = acc + r * r;
            }
        }
        acc.sqrt()
    }
}

/// How to obtain `∇² tr L` when the chart lacks fourth derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CurvatureOptions {
    pub laplacian_fallback: bool,
}

type VJet<T> = [Jet2<T>; 3];

fn vjet<T: Real, C: SurfaceChart<T> + ?Sized>(
    chart: &C,
    i: usize,
    j: usize,
    u: T,
    v: T,
    max: usize,
) -> VJet<T> {
    let p = |a: usize, b: usize| {
        if a + b <= max {
            chart.partial(a, b, u, v)
        } else {
            Vec3::zero()
        }
    };
    let (v0, du, dv) = (p(i, j), p(i + 1, j), p(i, j + 1));
    let (duu, duv, dvv) = (p(i + 2, j), p(i + 1, j + 1), p(i, j + 2));
    let c = |k: usize| {
        let g = |w: Vec3<T>| w.to_array()[k];
        Jet2::new(g(v0), g(du), g(dv), g(duu), g(duv), g(dvv))
    };
    [c(0), c(1), c(2)]
}

fn jdot<T: Real>(a: &VJet<T>, b: &VJet<T>) -> Jet2<T> {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn jcross<T: Real>(a: &VJet<T>, b: &VJet<T>) -> VJet<T> {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Jets of `tr L` and `det L` plus the point-valued fundamental forms.
struct Forms<T> {
    h: Jet2<T>,
    k: Jet2<T>,
    metric: [[T; 2]; 2],
    second: [[T; 2]; 2],
    ru: Vec3<T>,
    rv: Vec3<T>,
    cross: T,
}

fn forms<T: Real, C: SurfaceChart<T> + ?Sized>(chart: &C, u: T, v: T) -> Result<Forms<T>> {
    let max = chart.max_order();
    let ru = vjet(chart, 1, 0, u, v, max);
    let rv = vjet(chart, 0, 1, u, v, max);
    let ruu = vjet(chart, 2, 0, u, v, max);
    let ruv = vjet(chart, 1, 1, u, v, max);
    let rvv = vjet(chart, 0, 2, u, v, max);

    let e_ = jdot(&ru, &ru);
    let f_ = jdot(&ru, &rv);
    let g_ = jdot(&rv, &rv);
    let w2 = e_ * g_ - f_ * f_;
    let nu = jcross(&ru, &rv);
    // Unnormalised second form: r_ij · (r_u × r_v) = |r_u × r_v| II_ij.
    let (l, m, n) = (jdot(&ruu, &nu), jdot(&ruv, &nu), jdot(&rvv, &nu));

    let ruv0 = chart.partial(1, 0, u, v);
    let rvv0 = chart.partial(0, 1, u, v);
    let cross = ruv0.cross(rvv0).norm();
    let scale = ruv0.norm() * rvv0.norm();
    if !(cross > T::epsilon().sqrt() * scale) {
        return Err(Error::SingularChart {
            u: u.to_f64_lossy(),
            v: v.to_f64_lossy(),
            cross: cross.to_f64_lossy(),
        });
    }

    let s = chart.orientation().sign::<T>();
    let w = w2.sqrt();
    let w3 = w2 * w;
    let two = T::lit(2.0);
    let h = (l * g_ - f_ * m * two + n * e_) / w3 * s;
    let k = (l * n - m * m) / (w2 * w2);
    let wv = w.v;
    Ok(Forms {
        h,
        k,
        metric: [[e_.v, f_.v], [f_.v, g_.v]],
        second: [[s * l.v / wv, s * m.v / wv], [s * m.v / wv, s * n.v / wv]],
        ru: ruv0,
        rv: rvv0,
        cross,
    })
}

fn inverse2<T: Real>(a: [[T; 2]; 2]) -> [[T; 2]; 2] {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    [[a[1][1] / det, -a[0][1] / det], [-a[1][0] / det, a[0][0] / det]]
}

pub(crate) fn symmetric_eigenvalues<T: Real>(l: [[T; 2]; 2]) -> [T; 2] {
    let two = T::lit(2.0);
    let mean = (l[0][0] + l[1][1]) / two;
    let half = (l[0][0] - l[1][1]) / two;
    let d = half.hypot(l[0][1]);
    [mean + d, mean - d]
}

/// Curvature at `(u, v)` with the fourth-order Laplacian only when the
/// chart provides exact fourth derivatives.
pub fn curvature_at<T: Real, C: SurfaceChart<T> + ?Sized>(chart: &C, u: T, v: T) -> Result<CurvatureSample<T>> {
    curvature_at_with(chart, u, v, CurvatureOptions::default())
}

pub fn curvature_at_with<T: Real, C: SurfaceChart<T> + ?Sized>(
    chart: &C,
    u: T,
    v: T,
    options: CurvatureOptions,
) -> Result<CurvatureSample<T>> {
    if chart.max_order() < 3 {
        return Err(Error::MissingDerivatives { what: "curvature gradient", required: 3, available: chart.max_order() });
    }
    if !chart.domain().contains(u, v) {
        return Err(Error::InvalidInput(format!(
            "parameter point ({}, {}) outside chart domain",
            u.to_f64_lossy(),
            v.to_f64_lossy()
        )));
    }
    let fm = forms(chart, u, v)?;
    let g = fm.metric;
    let ginv = inverse2(g);

    // e₁ = a₁₁ r_u, e₂ = a₂₁ r_u + a₂₂ r_v
    let se = g[0][0].sqrt();
    let rest = (g[1][1] - g[0][1] * g[0][1] / g[0][0]).sqrt();
    let a = [[T::one() / se, T::zero()], [-g[0][1] / (g[0][0] * rest), T::one() / rest]];
    let e1 = fm.ru.scale(a[0][0]);
    let e2 = fm.ru.scale(a[1][0]) + fm.rv.scale(a[1][1]);
    let normal = fm.ru.cross(fm.rv).scale(chart.orientation().sign::<T>() / fm.cross);

    let mut l = [[T::zero(); 2]; 2];
    for p in 0..2 {
        for q in 0..2 {
            let mut acc = T::zero();
            for i in 0..2 {
                for j in 0..2 {
                    acc = acc + a[p][i] * a[q][j] * fm.second[i][j];
                }
            }
            l[p][q] = acc;
        }
    }
    let sym = (l[0][1] + l[1][0]) / T::lit(2.0);
    l[0][1] = sym;
    l[1][0] = sym;

    let hg = fm.h.gradient();
    let grad = [a[0][0] * hg[0] + a[0][1] * hg[1], a[1][0] * hg[0] + a[1][1] * hg[1]];

    let lap = if chart.max_order() >= 4 {
        Some(laplace_beltrami(chart, u, v, &ginv, hg, fm.h.hessian()))
    } else if options.laplacian_fallback {
        Some(laplace_beltrami(chart, u, v, &ginv, hg, fd_hessian(chart, u, v)?))
    } else {
        None
    };

    Ok(CurvatureSample {
        point: chart.point(u, v),
        frame: [e1, e2],
        normal,
        l,
        tr_l: fm.h.v,
        det_l: fm.k.v,
        kappa: symmetric_eigenvalues(l),
        grad_tr_l: grad,
        lap_tr_l: lap,
        area_element: fm.cross,
    })
}

fn laplace_beltrami<T: Real, C: SurfaceChart<T> + ?Sized>(
    chart: &C,
    u: T,
    v: T,
    ginv: &[[T; 2]; 2],
    grad: [T; 2],
    hess: [[T; 2]; 2],
) -> T {
    let r = [chart.partial(1, 0, u, v), chart.partial(0, 1, u, v)];
    let rr = [
        [chart.partial(2, 0, u, v), chart.partial(1, 1, u, v)],
        [chart.partial(1, 1, u, v), chart.partial(0, 2, u, v)],
    ];
    let mut acc = T::zero();
    for i in 0..2 {
        for j in 0..2 {
            // Γᵏᵢⱼ Hₖ = g^{kl} (r_ij · r_l) H_k
            let mut gamma_h = T::zero();
            for k in 0..2 {
                for m in 0..2 {
                    gamma_h = gamma_h + ginv[k][m] * rr[i][j].dot(r[m]) * grad[k];
                }
            }
            acc = acc + ginv[i][j] * (hess[i][j] - gamma_h);
        }
    }
    acc
}

fn fd_hessian<T: Real, C: SurfaceChart<T> + ?Sized>(chart: &C, u: T, v: T) -> Result<[[T; 2]; 2]> {
    let h = T::epsilon().cbrt() * chart.parameter_scale();
    let g = |du: T, dv: T| forms(chart, u + du, v + dv).map(|f| f.h.gradient());
    let z = T::zero();
    let (up, um, vp, vm) = (g(h, z)?, g(-h, z)?, g(z, h)?, g(z, -h)?);
    let two_h = h + h;
    let huu = (up[0] - um[0]) / two_h;
    let hvv = (vp[1] - vm[1]) / two_h;
    let huv = ((up[1] - um[1]) / two_h + (vp[0] - vm[0]) / two_h) / T::lit(2.0);
    Ok([[huu, huv], [huv, hvv]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::shapes::{EllipsoidChart, PlanePatch, TorusChart};

    #[test]
    fn unit_sphere_has_positive_trace_with_inward_normal() {
        let s = curvature_at(&EllipsoidChart::sphere(1.0_f64), 0.7, 1.2).unwrap();
        assert!((s.tr_l - 2.0).abs() < 1e-13);
        assert!((s.det_l - 1.0).abs() < 1e-13);
        assert!((s.kappa[0] - 1.0).abs() < 1e-7 && (s.kappa[1] - 1.0).abs() < 1e-7);
        assert!((s.normal + s.point).norm() < 1e-13);
        assert!(s.grad_tr_l_sq() < 1e-24);
        assert!(s.lap_tr_l.unwrap().abs() < 1e-11);
    }

    #[test]
    fn plane_is_flat() {
        let s = curvature_at(&PlanePatch, 0.1, -0.3).unwrap();
        assert_eq!(s.tr_l, 0.0);
        assert_eq!(s.det_l, 0.0);
    }

    #[test]
    fn torus_outer_equator() {
        let s = curvature_at(&TorusChart { major: 2.0_f64, minor: 0.5 }, 0.0, 0.3).unwrap();
        let mut k = s.kappa;
        k.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((k[0] - 0.4).abs() < 1e-12, "{k:?}");
        assert!((k[1] - 2.0).abs() < 1e-12, "{k:?}");
        assert!(s.cayley_hamilton_residual() < 1e-12);
    }

    #[test]
    fn frame_is_orthonormal_and_tangent() {
        let s = curvature_at(&EllipsoidChart::new(1.0_f64, 1.3, 1.7), 1.0, 2.0).unwrap();
        let [e1, e2] = s.frame;
        for (x, want) in [(e1.dot(e1), 1.0), (e2.dot(e2), 1.0), (e1.dot(e2), 0.0), (e1.dot(s.normal), 0.0)] {
            assert!((x - want).abs() < 1e-13);
        }
        // Inward normal of a convex body points towards the origin.
        assert!(s.normal.dot(s.point) < 0.0);
    }

    #[test]
    fn finite_difference_laplacian_matches_exact() {
        struct Order3(EllipsoidChart<f64>);
        impl SurfaceChart<f64> for Order3 {
            fn domain(&self) -> crate::geometry::chart::ParamDomain<f64> {
                self.0.domain()
            }
            fn orientation(&self) -> crate::geometry::chart::Orientation {
                self.0.orientation()
            }
            fn max_order(&self) -> usize {
                3
            }
            fn partial(&self, i: usize, j: usize, u: f64, v: f64) -> Vec3<f64> {
                self.0.partial(i, j, u, v)
            }
        }
        let e = EllipsoidChart::new(1.0, 1.3, 1.7);
        let exact = curvature_at(&e, 1.1, 0.4).unwrap().lap_tr_l.unwrap();
        let c = Order3(e);
        assert!(curvature_at(&c, 1.1, 0.4).unwrap().lap_tr_l.is_none());
        let opts = CurvatureOptions { laplacian_fallback: true };
        let fd = curvature_at_with(&c, 1.1, 0.4, opts).unwrap().lap_tr_l.unwrap();
        assert!((fd - exact).abs() < 1e-7 * exact.abs().max(1.0), "{fd} vs {exact}");
    }

    #[test]
    fn pole_is_outside_the_open_domain() {
        assert!(curvature_at(&EllipsoidChart::sphere(1.0_f64), 0.0, 1.0).is_err());
    }
}
