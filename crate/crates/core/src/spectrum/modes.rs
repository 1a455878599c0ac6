use std::cmp::Ordering;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Real;

pub const MODE_LIST_SCHEMA_VERSION: u32 = 1;

/// Eigenvalue family of the ball.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Family {
    Te,
    Tm,
    Dirichlet,
    Neumann,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Te => "TE",
            Family::Tm => "TM",
            Family::Dirichlet => "DIRICHLET",
            Family::Neumann => "NEUMANN",
        }
    }

    /// Smallest angular index carried by the family.
    pub fn min_l(self) -> u32 {
        match self {
            Family::Te | Family::Tm => 1,
            Family::Dirichlet | Family::Neumann => 0,
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One eigenvalue `λ = ω²` with its degeneracy. `m` is the radial index,
/// starting at 1 within each `(family, l)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode<T> {
    pub family: Family,
    pub l: u32,
    pub m: u32,
    pub multiplicity: u32,
    pub lambda: T,
}

impl<T: Real> Mode<T> {
    pub fn omega(&self) -> T {
        self.lambda.sqrt()
    }

    fn order(&self, other: &Self) -> Ordering {
        self.lambda
            .partial_cmp(&other.lambda)
            .unwrap_or(Ordering::Equal)
            .then(self.family.cmp(&other.family))
            .then(self.l.cmp(&other.l))
            .then(self.m.cmp(&other.m))
    }
}

/// Sidecar metadata travelling with an exported mode list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeListMeta {
    pub schema_version: u32,
    pub radius: f64,
    pub omega_max: f64,
    pub zero_modes_excluded: bool,
    pub families: Vec<Family>,
    pub modes: usize,
    pub multiplicity_total: u64,
    /// Relative accuracy of every eigenvalue, as attested by the producer.
    pub root_relative_accuracy: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    family: Family,
    l: u32,
    m: u32,
    multiplicity: u32,
    lambda: f64,
}

/// Eigenvalues below a frequency cutoff, sorted by `λ`, then family, `l`
/// and `m`. Zero eigenvalues never appear.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeList<T> {
    entries: Vec<Mode<T>>,
    omega_max: T,
    radius: T,
    families: Vec<Family>,
    root_accuracy: f64,
}

impl<T: Real> ModeList<T> {
    /// Validates and sorts `entries`. Every `λ` must lie in `(0, ω_max²]`.
    pub fn new(mut entries: Vec<Mode<T>>, omega_max: T, radius: T, root_accuracy: f64) -> Result<Self> {
        if !(omega_max > T::zero()) || !(radius > T::zero()) {
            return Err(Error::InvalidInput(format!("need omega_max > 0 and radius > 0, got {omega_max} and {radius}")));
        }
        let top = omega_max * omega_max;
        for e in &entries {
            if !(e.lambda > T::zero()) || e.lambda > top {
                return Err(Error::InvalidInput(format!(
                    "eigenvalue {} of {} l = {} outside (0, {}]",
                    e.lambda, e.family, e.l, top
                )));
            }
            if e.multiplicity == 0 {
                return Err(Error::InvalidInput(format!("zero multiplicity for {} l = {}", e.family, e.l)));
            }
        }
        entries.sort_by(|a, b| a.order(b));
        let mut families: Vec<Family> = entries.iter().map(|e| e.family).collect();
        families.sort();
        families.dedup();
        Ok(Self { entries, omega_max, radius, families, root_accuracy })
    }

    pub fn entries(&self) -> &[Mode<T>] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn omega_max(&self) -> T {
        self.omega_max
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn families(&self) -> &[Family] {
        &self.families
    }

    pub fn root_accuracy(&self) -> f64 {
        self.root_accuracy
    }

    /// Total number of eigenvalues counted with multiplicity.
    pub fn multiplicity_total(&self) -> u64 {
        self.entries.iter().map(|e| e.multiplicity as u64).sum()
    }

    /// `N(ω)`: eigenvalues with `√λ ≤ ω`, with multiplicity.
    pub fn counting_function(&self, omega: T) -> u64 {
        let lam = omega * omega;
        let end = self.entries.partition_point(|e| e.lambda <= lam);
        self.entries[..end].iter().map(|e| e.multiplicity as u64).sum()
    }

    /// Restriction to one family.
    pub fn family(&self, family: Family) -> Self {
        let entries = self.entries.iter().copied().filter(|e| e.family == family).collect();
        Self {
            entries,
            omega_max: self.omega_max,
            radius: self.radius,
            families: vec![family],
            root_accuracy: self.root_accuracy,
        }
    }

    /// Restriction to `√λ ≤ omega_max`, which must not exceed the current cutoff.
    pub fn truncated(&self, omega_max: T) -> Result<Self> {
        if omega_max > self.omega_max {
            return Err(Error::CutoffTooLow {
                parameter: "omega_max",
                requested: omega_max.to_f64_lossy(),
                minimum: self.omega_max.to_f64_lossy(),
            });
        }
        let lam = omega_max * omega_max;
        let end = self.entries.partition_point(|e| e.lambda <= lam);
        let mut out = self.clone();
        out.entries.truncate(end);
        out.omega_max = omega_max;
        Ok(out)
    }

    /// Disjoint union of two lists over the same ball and cutoff.
    pub fn union(&self, other: &Self) -> Result<Self> {
        if self.radius != other.radius || self.omega_max != other.omega_max {
            return Err(Error::InvalidInput("union needs equal radius and cutoff".into()));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Self::new(entries, self.omega_max, self.radius, self.root_accuracy.max(other.root_accuracy))
    }

    /// The same spectrum for a ball of radius `s·R`: `λ → λ/s²`.
    pub fn scaled(&self, s: T) -> Result<Self> {
        let inv2 = (s * s).recip();
        let entries = self.entries.iter().map(|e| Mode { lambda: e.lambda * inv2, ..*e }).collect();
        Self::new(entries, self.omega_max / s, self.radius * s, self.root_accuracy)
    }

    pub fn meta(&self) -> ModeListMeta {
        ModeListMeta {
            schema_version: MODE_LIST_SCHEMA_VERSION,
            radius: self.radius.to_f64_lossy(),
            omega_max: self.omega_max.to_f64_lossy(),
            zero_modes_excluded: true,
            families: self.families.clone(),
            modes: self.entries.len(),
            multiplicity_total: self.multiplicity_total(),
            root_relative_accuracy: self.root_accuracy,
        }
    }

    /// CSV with header `family,l,m,multiplicity,lambda`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for e in &self.entries {
            w.serialize(CsvRow {
                family: e.family,
                l: e.l,
                m: e.m,
                multiplicity: e.multiplicity,
                lambda: e.lambda.to_f64_lossy(),
            })
            .map_err(io_error)?;
        }
        w.flush().map_err(|e| Error::InvalidInput(format!("writing mode list: {e}")))
    }

    /// Reads a CSV written by [`ModeList::write_csv`] (or by any other
    /// producer following the same header) together with its sidecar.
    pub fn read_csv<R: Read>(reader: R, meta: &ModeListMeta) -> Result<Self> {
        if meta.schema_version != MODE_LIST_SCHEMA_VERSION {
            return Err(Error::InvalidInput(format!("unsupported mode list schema version {}", meta.schema_version)));
        }
        let mut r = csv::Reader::from_reader(reader);
        let mut entries = Vec::new();
        for row in r.deserialize::<CsvRow>() {
            let row = row.map_err(io_error)?;
            entries.push(Mode {
                family: row.family,
                l: row.l,
                m: row.m,
                multiplicity: row.multiplicity,
                lambda: T::lit(row.lambda),
            });
        }
        Self::new(entries, T::lit(meta.omega_max), T::lit(meta.radius), meta.root_relative_accuracy)
    }
}

fn io_error(e: csv::Error) -> Error {
    match e.position() {
        Some(p) => Error::Parse { line: p.line() as usize, column: 0, message: e.to_string() },
        None => Error::InvalidInput(e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mode(family: Family, l: u32, lambda: f64) -> Mode<f64> {
        Mode { family, l, m: 1, multiplicity: 2 * l + 1, lambda }
    }

    #[test]
    fn rejects_zero_and_out_of_range_eigenvalues() {
        assert!(ModeList::new(vec![mode(Family::Neumann, 0, 0.0)], 3.0, 1.0, 1e-13).is_err());
        assert!(ModeList::new(vec![mode(Family::Te, 1, 9.5)], 3.0, 1.0, 1e-13).is_err());
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let list = ModeList::new(
            vec![mode(Family::Tm, 1, 7.527929), mode(Family::Te, 1, 20.190728556426628), mode(Family::Te, 2, 1.0 / 3.0)],
            5.0,
            1.0,
            1e-13,
        )
        .unwrap();
        let mut buf = Vec::new();
        list.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("family,l,m,multiplicity,lambda\nTE,2,1,5,"));
        let back = ModeList::<f64>::read_csv(&buf[..], &list.meta()).unwrap();
        assert_eq!(back, list);
    }

    #[test]
    fn counting_function_uses_multiplicity() {
        let list = ModeList::new(vec![mode(Family::Te, 1, 4.0), mode(Family::Te, 2, 9.0)], 5.0, 1.0, 0.0).unwrap();
        assert_eq!(list.counting_function(1.9), 0);
        assert_eq!(list.counting_function(2.0), 3);
        assert_eq!(list.counting_function(5.0), 8);
    }
}
