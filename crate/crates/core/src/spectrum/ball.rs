use super::modes::{Family, Mode, ModeList};
use super::roots::{enumerate, Wanted};
use crate::error::{Error, Result};
use crate::Real;

/// Relative accuracy attested for every enumerated eigenvalue.
pub const ROOT_RELATIVE_ACCURACY: f64 = 1e-13;

/// Scalar Laplacian with Dirichlet conditions on the ball of radius `radius`.
pub fn dirichlet_modes<T: Real>(radius: T, omega_max: T) -> Result<ModeList<T>> {
    ball_modes(radius, omega_max, Wanted { dirichlet: true, ..Wanted::default() })
}

/// Scalar Laplacian with Neumann conditions; the constant mode is left out.
pub fn neumann_modes<T: Real>(radius: T, omega_max: T) -> Result<ModeList<T>> {
    ball_modes(radius, omega_max, Wanted { neumann: true, ..Wanted::default() })
}

/// Perfect-conductor cavity: TE modes `j_l(ωR) = 0` and TM modes
/// `(x j_l(x))' = 0` at `x = ωR`, both for `l ≥ 1`.
pub fn em_modes<T: Real>(radius: T, omega_max: T) -> Result<ModeList<T>> {
    ball_modes(radius, omega_max, Wanted { te: true, tm: true, ..Wanted::default() })
}

/// Any combination of the four families in one pass over `l`.
pub fn ball_modes_for<T: Real>(radius: T, omega_max: T, families: &[Family]) -> Result<ModeList<T>> {
    let wanted = Wanted {
        dirichlet: families.contains(&Family::Dirichlet),
        neumann: families.contains(&Family::Neumann),
        te: families.contains(&Family::Te),
        tm: families.contains(&Family::Tm),
    };
    ball_modes(radius, omega_max, wanted)
}

fn ball_modes<T: Real>(radius: T, omega_max: T, wanted: Wanted) -> Result<ModeList<T>> {
    if !(radius > T::zero()) || !(omega_max > T::zero()) || !(omega_max * radius).is_finite() {
        return Err(Error::InvalidInput(format!("need radius > 0 and omega_max > 0, got {radius} and {omega_max}")));
    }
    let xmax = omega_max * radius;
    let inv_r2 = (radius * radius).recip();
    let top = omega_max * omega_max;
    let mut entries = Vec::new();
    for (family, l, roots) in enumerate(xmax, wanted)? {
        for (m, x) in roots.into_iter().enumerate() {
            let lambda = (x * x * inv_r2).min(top);
            entries.push(Mode { family, l, m: m as u32 + 1, multiplicity: 2 * l + 1, lambda });
        }
    }
    ModeList::new(entries, omega_max, radius, ROOT_RELATIVE_ACCURACY)
}
