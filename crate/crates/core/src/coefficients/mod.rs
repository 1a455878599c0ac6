//! Heat-kernel coefficients: the electromagnetic set, the p-form sets from
//! the exact c-table, their mutual consistency, and `ã₃`, `δa₃`.

pub mod a3;
pub mod consistency;
pub mod moments;
pub mod report;
pub mod sets;
pub mod table;

pub use a3::{a3_local, a3_local_exact, a3_local_kappa_variant, delta_a3, DeltaA3};
pub use consistency::{consistency_report, gauss_bonnet_residual, numeric_consistency, ConsistencyReport, NumericConsistency, RelationCheck};
pub use moments::{compute_moments, GeometricMoments, Moment};
pub use report::{coefficient_report, CoefficientReport};
pub use sets::{em_coefficients, form_coefficients, CoefficientKind, HeatCoefficientSet, Provenance};
pub use table::{em_local, form_local, LinearForm, Q};
