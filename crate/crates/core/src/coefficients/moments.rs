use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{enclosed_volume, surface_integrals, CurvatureOptions, Integral, QuadratureSpec, SurfaceModel};
use crate::Real;

/// The eleven integrals entering every coefficient formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Moment {
    Volume,
    Area,
    TrL,
    TrL2,
    DetL,
    TrL3,
    TrLDetL,
    TrL4,
    TrL2DetL,
    DetL2,
    TrLLapTrL,
}

impl Moment {
    pub const ALL: [Moment; 11] = [
        Moment::Volume,
        Moment::Area,
        Moment::TrL,
        Moment::TrL2,
        Moment::DetL,
        Moment::TrL3,
        Moment::TrLDetL,
        Moment::TrL4,
        Moment::TrL2DetL,
        Moment::DetL2,
        Moment::TrLLapTrL,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Power of length carried by the moment.
    pub fn length_power(self) -> i32 {
        match self {
            Moment::Volume => 3,
            Moment::Area => 2,
            Moment::TrL => 1,
            Moment::TrL2 | Moment::DetL => 0,
            Moment::TrL3 | Moment::TrLDetL => -1,
            Moment::TrL4 | Moment::TrL2DetL | Moment::DetL2 | Moment::TrLLapTrL => -2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Moment::Volume => "|Omega|",
            Moment::Area => "|dOmega|",
            Moment::TrL => "(tr L)[dOmega]",
            Moment::TrL2 => "((tr L)^2)[dOmega]",
            Moment::DetL => "(det L)[dOmega]",
            Moment::TrL3 => "((tr L)^3)[dOmega]",
            Moment::TrLDetL => "(tr L det L)[dOmega]",
            Moment::TrL4 => "((tr L)^4)[dOmega]",
            Moment::TrL2DetL => "((tr L)^2 det L)[dOmega]",
            Moment::DetL2 => "((det L)^2)[dOmega]",
            Moment::TrLLapTrL => "(tr L lap tr L)[dOmega]",
        }
    }
}

/// Volume and boundary curvature integrals, each with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometricMoments<T> {
    pub values: [Integral<T>; 11],
}

impl<T: Real> GeometricMoments<T> {
    pub fn get(&self, m: Moment) -> T {
        self.values[m.index()].value
    }

    pub fn error(&self, m: Moment) -> T {
        self.values[m.index()].error
    }

    pub fn from_values(values: [T; 11]) -> Self {
        Self { values: values.map(Integral::exact) }
    }

    /// Exact moments of the ball of radius `r`.
    pub fn ball(r: T) -> Self {
        let four_pi = T::lit(4.0) * T::PI();
        let area = four_pi * r * r;
        let k = T::one() / r;
        let mut v = [T::zero(); 11];
        v[Moment::Volume.index()] = area * r / T::lit(3.0);
        v[Moment::Area.index()] = area;
        for m in Moment::ALL.into_iter().skip(2) {
            let (tr_pow, det_pow) = match m {
                Moment::TrL => (1, 0),
                Moment::TrL2 => (2, 0),
                Moment::DetL => (0, 1),
                Moment::TrL3 => (3, 0),
                Moment::TrLDetL => (1, 1),
                Moment::TrL4 => (4, 0),
                Moment::TrL2DetL => (2, 1),
                Moment::DetL2 => (0, 2),
                _ => continue,
            };
            let tr = (k + k).powi(tr_pow);
            let det = (k * k).powi(det_pow);
            v[m.index()] = area * tr * det;
        }
        Self::from_values(v)
    }

    /// Moments of the cavity dilated by `s`.
    pub fn scaled(&self, s: T) -> Self {
        let mut values = self.values;
        for m in Moment::ALL {
            values[m.index()] = values[m.index()].scale(s.powi(m.length_power()));
        }
        Self { values }
    }
}

/// Evaluates all moments by quadrature.
///
/// `(tr L ∇² tr L)[∂Ω]` is obtained as `−∮|∇ tr L|²`, which needs only
/// third embedding derivatives.
pub fn compute_moments<T: Real>(model: &SurfaceModel<T>, quad: &QuadratureSpec) -> Result<GeometricMoments<T>> {
    let volume = enclosed_volume(model, quad)?;
    let ints = surface_integrals(model, quad, CurvatureOptions::default(), |s| {
        let (t, d) = (s.tr_l, s.det_l);
        let t2 = t * t;
        [T::one(), t, t2, d, t2 * t, t * d, t2 * t2, t2 * d, d * d, -s.grad_tr_l_sq()]
    })?;
    let mut values = [volume; 11];
    values[1..].copy_from_slice(&ints);
    Ok(GeometricMoments { values })
}
