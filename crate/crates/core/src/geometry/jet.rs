//! Second-order bivariate jets: a value together with its first and second
//! partial derivatives in the chart parameters `(u, v)`.
//!
//! Arithmetic follows the Leibniz and chain rules exactly, so curvature
//! quantities built from jets of the embedding derivatives carry their own
//! exact parameter derivatives.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet2<T> {
    pub v: T,
    pub du: T,
    pub dv: T,
    pub duu: T,
    pub duv: T,
    pub dvv: T,
}

impl<T: Real> Jet2<T> {
    pub fn constant(v: T) -> Self {
        let z = T::zero();
        Self { v, du: z, dv: z, duu: z, duv: z, dvv: z }
    }

    pub fn new(v: T, du: T, dv: T, duu: T, duv: T, dvv: T) -> Self {
        Self { v, du, dv, duu, duv, dvv }
    }

    /// Applies a scalar function given its value and first two derivatives
    /// at `self.v`.
    #[inline]
    pub fn chain(self, f: T, f1: T, f2: T) -> Self {
        Self {
            v: f,
            du: f1 * self.du,
            dv: f1 * self.dv,
            duu: f2 * self.du * self.du + f1 * self.duu,
            duv: f2 * self.du * self.dv + f1 * self.duv,
            dvv: f2 * self.dv * self.dv + f1 * self.dvv,
        }
    }

    pub fn recip(self) -> Self {
        let r = T::one() / self.v;
        self.chain(r, -r * r, T::lit(2.0) * r * r * r)
    }

    pub fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        let half = T::lit(0.5);
        self.chain(s, half / s, -T::lit(0.25) / (s * s * s))
    }

    pub fn gradient(&self) -> [T; 2] {
        [self.du, self.dv]
    }

    pub fn hessian(&self) -> [[T; 2]; 2] {
        [[self.duu, self.duv], [self.duv, self.dvv]]
    }
}

impl<T: Real> Add for Jet2<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self {
            v: self.v + o.v,
            du: self.du + o.du,
            dv: self.dv + o.dv,
            duu: self.duu + o.duu,
            duv: self.duv + o.duv,
            dvv: self.dvv + o.dvv,
        }
    }
}

impl<T: Real> Sub for Jet2<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self {
            v: self.v - o.v,
            du: self.du - o.du,
            dv: self.dv - o.dv,
            duu: self.duu - o.duu,
            duv: self.duv - o.duv,
            dvv: self.dvv - o.dvv,
        }
    }
}

impl<T: Real> Neg for Jet2<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self { v: -self.v, du: -self.du, dv: -self.dv, duu: -self.duu, duv: -self.duv, dvv: -self.dvv }
    }
}

impl<T: Real> Mul for Jet2<T> {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Self {
            v: self.v * o.v,
            du: self.du * o.v + self.v * o.du,
            dv: self.dv * o.v + self.v * o.dv,
            duu: self.duu * o.v + T::lit(2.0) * self.du * o.du + self.v * o.duu,
            duv: self.duv * o.v + self.du * o.dv + self.dv * o.du + self.v * o.duv,
            dvv: self.dvv * o.v + T::lit(2.0) * self.dv * o.dv + self.v * o.dvv,
        }
    }
}

impl<T: Real> Mul<T> for Jet2<T> {
    type Output = Self;
    #[inline]
    fn mul(self, s: T) -> Self {
        Self {
            v: self.v * s,
            du: self.du * s,
            dv: self.dv * s,
            duu: self.duu * s,
            duv: self.duv * s,
            dvv: self.dvv * s,
        }
    }
}

impl<T: Real> Div for Jet2<T> {
    type Output = Self;
    #[inline]
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}
