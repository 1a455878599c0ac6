//! Built-in closed surfaces with closed-form derivative oracles of every
//! order.

use serde::{Deserialize, Serialize};

use super::chart::{Orientation, ParamDomain, SurfaceChart};
use super::vec3::Vec3;
use crate::Real;

/// `dᵏ/dxᵏ sin x`.
#[inline]
pub(crate) fn dsin<T: Real>(k: usize, x: T) -> T {
    match k % 4 {
        0 => x.sin(),
        1 => x.cos(),
        2 => -x.sin(),
        _ => -x.cos(),
    }
}

/// `dᵏ/dxᵏ cos x`.
#[inline]
pub(crate) fn dcos<T: Real>(k: usize, x: T) -> T {
    match k % 4 {
        0 => x.cos(),
        1 => -x.sin(),
        2 => -x.cos(),
        _ => x.sin(),
    }
}

/// Coordinate axis used as the polar axis of an ellipsoid chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Ellipsoid `x²/a² + y²/b² + z²/c² = 1` in polar coordinates
/// `(θ, φ) ∈ (0, π) × [0, 2π)` about a chosen axis.
///
/// The poles are excluded from the open θ-range; Gauss–Legendre nodes never
/// reach them.
#[derive(Debug, Clone, Copy)]
pub struct EllipsoidChart<T> {
    pub semi_axes: [T; 3],
    pub pole: Axis,
}

impl<T: Real> EllipsoidChart<T> {
    pub fn new(a: T, b: T, c: T) -> Self {
        Self { semi_axes: [a, b, c], pole: Axis::Z }
    }

    pub fn sphere(radius: T) -> Self {
        Self::new(radius, radius, radius)
    }

    pub fn with_pole(mut self, pole: Axis) -> Self {
        self.pole = pole;
        self
    }

    /// Maps the local frame `(p, q, pole)` onto `(x, y, z)`.
    fn place(&self, p: T, q: T, w: T) -> Vec3<T> {
        match self.pole {
            Axis::Z => Vec3::new(p, q, w),
            Axis::X => Vec3::new(w, p, q),
            Axis::Y => Vec3::new(q, w, p),
        }
    }

    fn local_axes(&self) -> [T; 3] {
        let [a, b, c] = self.semi_axes;
        match self.pole {
            Axis::Z => [a, b, c],
            Axis::X => [b, c, a],
            Axis::Y => [c, a, b],
        }
    }
}

impl<T: Real> SurfaceChart<T> for EllipsoidChart<T> {
    fn domain(&self) -> ParamDomain<T> {
        ParamDomain {
            u: (T::zero(), T::PI()),
            v: (T::zero(), T::TAU()),
            periodic: [false, true],
        }
    }

    fn orientation(&self) -> Orientation {
        // ∂θ r × ∂φ r points away from the centre for every pole choice
        // because `place` is a cyclic permutation.
        Orientation::Outward
    }

    fn max_order(&self) -> usize {
        usize::MAX
    }

    fn partial(&self, i: usize, j: usize, theta: T, phi: T) -> Vec3<T> {
        let [a, b, c] = self.local_axes();
        let p = a * dsin(i, theta) * dcos(j, phi);
        let q = b * dsin(i, theta) * dsin(j, phi);
        let w = if j == 0 { c * dcos(i, theta) } else { T::zero() };
        self.place(p, q, w)
    }
}

/// Torus of revolution about the z-axis, `u` around the tube and `v` around
/// the axis, both periodic.
#[derive(Debug, Clone, Copy)]
pub struct TorusChart<T> {
    pub major: T,
    pub minor: T,
}

impl<T: Real> SurfaceChart<T> for TorusChart<T> {
    fn domain(&self) -> ParamDomain<T> {
        ParamDomain {
            u: (T::zero(), T::TAU()),
            v: (T::zero(), T::TAU()),
            periodic: [true, true],
        }
    }

    fn orientation(&self) -> Orientation {
        Orientation::Inward
    }

    fn max_order(&self) -> usize {
        usize::MAX
    }

    fn partial(&self, i: usize, j: usize, u: T, v: T) -> Vec3<T> {
        let ring = if i == 0 {
            self.major + self.minor * u.cos()
        } else {
            self.minor * dcos(i, u)
        };
        let z = if j == 0 { self.minor * dsin(i, u) } else { T::zero() };
        Vec3::new(ring * dcos(j, v), ring * dsin(j, v), z)
    }
}

/// Flat square `z = 0`, `(u, v) ∈ (−1, 1)²`. Not closed; used for local
/// checks only.
#[derive(Debug, Clone, Copy, Default)]
pub struct PlanePatch;

impl<T: Real> SurfaceChart<T> for PlanePatch {
    fn domain(&self) -> ParamDomain<T> {
        ParamDomain { u: (-T::one(), T::one()), v: (-T::one(), T::one()), periodic: [false, false] }
    }

    fn orientation(&self) -> Orientation {
        Orientation::Inward
    }

    fn max_order(&self) -> usize {
        usize::MAX
    }

    fn partial(&self, i: usize, j: usize, u: T, v: T) -> Vec3<T> {
        let (o, z) = (T::one(), T::zero());
        match (i, j) {
            (0, 0) => Vec3::new(u, v, z),
            (1, 0) => Vec3::new(o, z, z),
            (0, 1) => Vec3::new(z, o, z),
            _ => Vec3::zero(),
        }
    }
}
