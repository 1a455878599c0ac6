use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::chart::{Scaled, SurfaceChart};
use super::shapes::{EllipsoidChart, TorusChart};
use crate::error::{Error, Result};
use crate::Real;

/// Number of boundary components and the genus of each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyInfo {
    pub components: usize,
    pub genera: Vec<u32>,
}

impl TopologyInfo {
    pub fn new(genera: Vec<u32>) -> Result<Self> {
        let t = Self { components: genera.len(), genera };
        t.validate()?;
        Ok(t)
    }

    pub fn connected(genus: u32) -> Self {
        Self { components: 1, genera: vec![genus] }
    }

    pub fn validate(&self) -> Result<()> {
        if self.components == 0 {
            return Err(Error::Topology("at least one boundary component required".into()));
        }
        if self.genera.len() != self.components {
            return Err(Error::Topology(format!(
                "{} genera listed for {} components",
                self.genera.len(),
                self.components
            )));
        }
        Ok(())
    }

    pub fn total_genus(&self) -> u64 {
        self.genera.iter().map(|&g| g as u64).sum()
    }

    /// `Σ (1 − gᵢ)`, half the Euler characteristic of the boundary.
    pub fn euler_half(&self) -> i64 {
        self.genera.iter().map(|&g| 1 - g as i64).sum()
    }
}

/// Closed-form reference values known for the built-in shapes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedForm<T> {
    pub area: Option<T>,
    pub volume: Option<T>,
}

/// Built-in shape descriptors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum Shape<T> {
    Sphere { radius: T },
    Ellipsoid { a: T, b: T, c: T },
    Torus { major: T, minor: T },
}

pub type DynChart<T> = Arc<dyn SurfaceChart<T>>;

/// One boundary component: charts that tile it, each oriented so the
/// normal points into the cavity.
#[derive(Clone)]
pub struct Component<T> {
    pub charts: Vec<DynChart<T>>,
    pub genus: u32,
}

/// A cavity boundary with its topology.
#[derive(Clone)]
pub struct SurfaceModel<T> {
    components: Vec<Component<T>>,
    topology: TopologyInfo,
    closed_form: Option<ClosedForm<T>>,
    name: String,
}

impl<T: Real> std::fmt::Debug for SurfaceModel<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SurfaceModel")
            .field("name", &self.name)
            .field("charts", &self.components.iter().map(|c| c.charts.len()).collect::<Vec<_>>())
            .field("topology", &self.topology)
            .finish()
    }
}

impl<T: Real> SurfaceModel<T> {
    pub fn new(name: impl Into<String>, components: Vec<Component<T>>) -> Result<Self> {
        if components.iter().any(|c| c.charts.is_empty()) {
            return Err(Error::Topology("component without charts".into()));
        }
        let topology = TopologyInfo::new(components.iter().map(|c| c.genus).collect())?;
        Ok(Self { components, topology, closed_form: None, name: name.into() })
    }

    pub fn with_closed_form(mut self, cf: ClosedForm<T>) -> Self {
        self.closed_form = Some(cf);
        self
    }

    pub fn from_shape(shape: Shape<T>) -> Result<Self> {
        let three = T::lit(3.0);
        let four_pi = T::lit(4.0) * T::PI();
        let positive = |xs: &[T]| xs.iter().all(|&x| x > T::zero() && x.is_finite());
        match shape {
            Shape::Sphere { radius: r } => {
                if !positive(&[r]) {
                    return Err(Error::InvalidInput("sphere radius must be positive".into()));
                }
                let chart: DynChart<T> = Arc::new(EllipsoidChart::sphere(r));
                Ok(Self::new("sphere", vec![Component { charts: vec![chart], genus: 0 }])?.with_closed_form(
                    ClosedForm { area: Some(four_pi * r * r), volume: Some(four_pi * r * r * r / three) },
                ))
            }
            Shape::Ellipsoid { a, b, c } => {
                if !positive(&[a, b, c]) {
                    return Err(Error::InvalidInput("ellipsoid semi-axes must be positive".into()));
                }
                let chart: DynChart<T> = Arc::new(EllipsoidChart::new(a, b, c));
                Ok(Self::new("ellipsoid", vec![Component { charts: vec![chart], genus: 0 }])?
                    .with_closed_form(ClosedForm { area: None, volume: Some(four_pi * a * b * c / three) }))
            }
            Shape::Torus { major, minor } => {
                if !positive(&[major, minor]) || minor >= major {
                    return Err(Error::InvalidInput("torus needs 0 < minor < major".into()));
                }
                let chart: DynChart<T> = Arc::new(TorusChart { major, minor });
                let pi2 = T::PI() * T::PI();
                Ok(Self::new("torus", vec![Component { charts: vec![chart], genus: 1 }])?.with_closed_form(
                    ClosedForm {
                        area: Some(T::lit(4.0) * pi2 * major * minor),
                        volume: Some(T::lit(2.0) * pi2 * major * minor * minor),
                    },
                ))
            }
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn topology(&self) -> &TopologyInfo {
        &self.topology
    }

    pub fn components(&self) -> &[Component<T>] {
        &self.components
    }

    pub fn closed_form(&self) -> Option<&ClosedForm<T>> {
        self.closed_form.as_ref()
    }

    pub fn charts(&self) -> impl Iterator<Item = &DynChart<T>> {
        self.components.iter().flat_map(|c| c.charts.iter())
    }

    /// The dilated cavity `{s·x : x ∈ Ω}`.
    pub fn scaled(&self, s: T) -> Self {
        let components = self
            .components
            .iter()
            .map(|c| Component {
                charts: c
                    .charts
                    .iter()
                    .map(|ch| Arc::new(Scaled { inner: ch.clone(), factor: s }) as DynChart<T>)
                    .collect(),
                genus: c.genus,
            })
            .collect();
        let closed_form = self.closed_form.map(|cf| ClosedForm {
            area: cf.area.map(|a| a * s * s),
            volume: cf.volume.map(|v| v * s * s * s),
        });
        Self { components, topology: self.topology.clone(), closed_form, name: self.name.clone() }
    }
}
