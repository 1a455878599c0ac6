use serde::{Deserialize, Serialize};

use super::vec3::Vec3;
use crate::Real;

/// Rectangle of chart parameters plus the periodicity of each direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamDomain<T> {
    pub u: (T, T),
    pub v: (T, T),
    pub periodic: [bool; 2],
}

impl<T: Real> ParamDomain<T> {
    pub fn contains(&self, u: T, v: T) -> bool {
        let inside = |x: T, (a, b): (T, T), periodic: bool| periodic || (x > a && x < b);
        inside(u, self.u, self.periodic[0]) && inside(v, self.v, self.periodic[1])
    }

    pub fn width(&self) -> (T, T) {
        (self.u.1 - self.u.0, self.v.1 - self.v.0)
    }
}

/// Direction of `∂ᵤr × ∂ᵥr` relative to the cavity interior.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Inward,
    Outward,
}

impl Orientation {
    pub fn sign<T: Real>(self) -> T {
        match self {
            Orientation::Inward => T::one(),
            Orientation::Outward => -T::one(),
        }
    }
}

/// Where a chart's partial derivatives come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeSource {
    Exact,
    FiniteDifference,
}

/// A smooth parametric patch `(u, v) ↦ r(u, v)` of a boundary surface.
pub trait SurfaceChart<T: Real>: Send + Sync {
    fn domain(&self) -> ParamDomain<T>;

    fn orientation(&self) -> Orientation;

    /// Highest total order `i + j` for which [`partial`](Self::partial) is
    /// available.
    fn max_order(&self) -> usize;

    /// `∂ᵤⁱ ∂ᵥʲ r(u, v)`.
    fn partial(&self, i: usize, j: usize, u: T, v: T) -> Vec3<T>;

    fn derivative_source(&self) -> DerivativeSource {
        DerivativeSource::Exact
    }

    /// Characteristic parameter length, used to size difference steps.
    fn parameter_scale(&self) -> T {
        let (wu, wv) = self.domain().width();
        wu.min(wv) / T::PI()
    }

    fn point(&self, u: T, v: T) -> Vec3<T> {
        self.partial(0, 0, u, v)
    }
}

impl<T: Real, C: SurfaceChart<T> + ?Sized> SurfaceChart<T> for std::sync::Arc<C> {
    fn domain(&self) -> ParamDomain<T> {
        (**self).domain()
    }
    fn orientation(&self) -> Orientation {
        (**self).orientation()
    }
    fn max_order(&self) -> usize {
        (**self).max_order()
    }
    fn partial(&self, i: usize, j: usize, u: T, v: T) -> Vec3<T> {
        (**self).partial(i, j, u, v)
    }
    fn derivative_source(&self) -> DerivativeSource {
        (**self).derivative_source()
    }
    fn parameter_scale(&self) -> T {
        (**self).parameter_scale()
    }
}

/// Affine reparametrization `(s, t) ↦ (u₀ + αs, v₀ + βt)` of another chart.
pub struct AffineReparam<C, T> {
    pub inner: C,
    pub u_offset: T,
    pub u_scale: T,
    pub v_offset: T,
    pub v_scale: T,
}

impl<T: Real, C: SurfaceChart<T>> SurfaceChart<T> for AffineReparam<C, T> {
    fn domain(&self) -> ParamDomain<T> {
        let d = self.inner.domain();
        let map = |(a, b): (T, T), off: T, s: T| {
            let (x, y) = ((a - off) / s, (b - off) / s);
            if x < y { (x, y) } else { (y, x) }
        };
        ParamDomain {
            u: map(d.u, self.u_offset, self.u_scale),
            v: map(d.v, self.v_offset, self.v_scale),
            periodic: d.periodic,
        }
    }

    fn orientation(&self) -> Orientation {
        let flipped = (self.u_scale * self.v_scale) < T::zero();
        match (self.inner.orientation(), flipped) {
            (o, false) => o,
            (Orientation::Inward, true) => Orientation::Outward,
            (Orientation::Outward, true) => Orientation::Inward,
        }
    }

    fn max_order(&self) -> usize {
        self.inner.max_order()
    }

    fn partial(&self, i: usize, j: usize, s: T, t: T) -> Vec3<T> {
        let u = self.u_offset + self.u_scale * s;
        let v = self.v_offset + self.v_scale * t;
        let f = self.u_scale.powi(i as i32) * self.v_scale.powi(j as i32);
        self.inner.partial(i, j, u, v).scale(f)
    }

    fn derivative_source(&self) -> DerivativeSource {
        self.inner.derivative_source()
    }
}

/// Chart built from an embedding closure only; derivatives come from
/// nested central differences. Accuracy degrades quickly with order, so
/// only orders up to 3 are offered.
pub struct FiniteDifferenceChart<F, T> {
    embed: F,
    domain: ParamDomain<T>,
    orientation: Orientation,
    step: T,
}

impl<T: Real, F: Fn(T, T) -> Vec3<T> + Send + Sync> FiniteDifferenceChart<F, T> {
    pub fn new(embed: F, domain: ParamDomain<T>, orientation: Orientation) -> Self {
        let (wu, wv) = domain.width();
        let step = T::epsilon().powf(T::lit(0.2)) * wu.min(wv);
        Self { embed, domain, orientation, step }
    }

    fn diff(&self, i: usize, j: usize, u: T, v: T) -> Vec3<T> {
        if i > 0 {
            let h = self.step;
            let p = self.diff(i - 1, j, u + h, v);
            let m = self.diff(i - 1, j, u - h, v);
            return (p - m).scale(T::one() / (h + h));
        }
        if j > 0 {
            let h = self.step;
            let p = self.diff(i, j - 1, u, v + h);
            let m = self.diff(i, j - 1, u, v - h);
            return (p - m).scale(T::one() / (h + h));
        }
        (self.embed)(u, v)
    }
}

impl<T: Real, F: Fn(T, T) -> Vec3<T> + Send + Sync> SurfaceChart<T> for FiniteDifferenceChart<F, T> {
    fn domain(&self) -> ParamDomain<T> {
        self.domain
    }
    fn orientation(&self) -> Orientation {
        self.orientation
    }
    fn max_order(&self) -> usize {
        3
    }
    fn partial(&self, i: usize, j: usize, u: T, v: T) -> Vec3<T> {
        self.diff(i, j, u, v)
    }
    fn derivative_source(&self) -> DerivativeSource {
        DerivativeSource::FiniteDifference
    }
}

/// Uniform dilation `x ↦ s·x` of another chart.
pub struct Scaled<C, T> {
    pub inner: C,
    pub factor: T,
}

impl<T: Real, C: SurfaceChart<T>> SurfaceChart<T> for Scaled<C, T> {
    fn domain(&self) -> ParamDomain<T> {
        self.inner.domain()
    }
    fn orientation(&self) -> Orientation {
        self.inner.orientation()
    }
    fn max_order(&self) -> usize {
        self.inner.max_order()
    }
    fn partial(&self, i: usize, j: usize, u: T, v: T) -> Vec3<T> {
        self.inner.partial(i, j, u, v).scale(self.factor)
    }
    fn derivative_source(&self) -> DerivativeSource {
        self.inner.derivative_source()
    }
    fn parameter_scale(&self) -> T {
        self.inner.parameter_scale()
    }
}
