//! Boundary surfaces: charts, curvature, quadrature and tensor identities.

pub mod chart;
pub mod expr;
pub mod curvature;
pub mod identities;
pub mod jet;
pub mod model;
pub mod quadrature;
pub mod shapes;
pub mod surface_file;
pub mod vec3;

pub use chart::{AffineReparam, DerivativeSource, FiniteDifferenceChart, Orientation, ParamDomain, Scaled, SurfaceChart};
pub use curvature::{curvature_at, curvature_at_with, CurvatureOptions, CurvatureSample};
pub use model::{ClosedForm, Component, DynChart, Shape, SurfaceModel, TopologyInfo};
pub use quadrature::{
    enclosed_volume, grad_tr_l_sq_integral, surface_integral, surface_integrals, tr_l_lap_tr_l_integral, Integral,
    QuadratureSpec,
};
pub use shapes::{Axis, EllipsoidChart, PlanePatch, TorusChart};
pub use vec3::Vec3;
pub use surface_file::{parse_surface, ExprChart, SurfaceFile};
