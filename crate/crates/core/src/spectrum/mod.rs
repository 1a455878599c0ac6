//! Exact spectra of the ball and the traces built from them.

mod ball;
mod bessel;
mod modes;
mod roots;
mod trace;

pub use ball::{ball_modes_for, dirichlet_modes, em_modes, neumann_modes, ROOT_RELATIVE_ACCURACY};
pub use bessel::{spherical_jn, spherical_jn_sequence, spherical_jn_with_derivative};
pub use modes::{Family, Mode, ModeList, ModeListMeta, MODE_LIST_SCHEMA_VERSION};
pub use trace::{heat_trace, heat_trace_series, min_heat_t, resolvent2_trace, weyl_deviation, ResolventSample, TailModel, TraceSample};
