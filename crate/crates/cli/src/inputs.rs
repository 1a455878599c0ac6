use std::path::{Path, PathBuf};

use emcavity::asymptotics::FitSample;
use emcavity::coefficients::{CoefficientKind, HeatCoefficientSet, Provenance};
use emcavity::geometry::{parse_surface, Shape, SurfaceModel};
use emcavity::spectrum::{Mode, ModeList, ModeListMeta};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::args::{SurfaceArgs, SurfaceSpec};
use crate::error::CliError;
use crate::manifest::Session;

/// JSON form of a mode list.
#[derive(Debug, Serialize, Deserialize)]
pub struct ModesDocument {
    pub meta: ModeListMeta,
    pub entries: Vec<Mode<f64>>,
}

pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("meta.json")
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path, data: &[u8]) -> Result<T, CliError> {
    serde_json::from_slice(data).map_err(|e| CliError::format(path, e))
}

pub fn load_modes(session: &mut Session, path: &Path) -> Result<ModeList<f64>, CliError> {
    if is_json(path) {
        let data = session.read(path)?;
        let doc: ModesDocument = parse_json(path, &data)?;
        let m = doc.meta;
        let list = ModeList::new(doc.entries, m.omega_max, m.radius, m.root_relative_accuracy)?;
        if list.len() != m.modes {
            return Err(CliError::format(path, format!("meta declares {} modes, found {}", m.modes, list.len())));
        }
        return Ok(list);
    }
    let meta_path = sidecar_path(path);
    let meta_data = session.read(&meta_path)?;
    let meta: ModeListMeta = parse_json(&meta_path, &meta_data)?;
    let data = session.read(path)?;
    let list = ModeList::read_csv(data.as_slice(), &meta)?;
    if list.len() != meta.modes {
        return Err(CliError::format(path, format!("sidecar declares {} modes, found {}", meta.modes, list.len())));
    }
    Ok(list)
}

/// Accepts the output of `coeffs` (its `selected` set), of `fit` (its
/// `set`), or a bare coefficient set. Missing errors read as infinite.
pub fn load_coefficients(session: &mut Session, path: &Path) -> Result<HeatCoefficientSet<f64>, CliError> {
    let data = session.read(path)?;
    let root: Value = parse_json(path, &data)?;
    let set = ["selected", "set"].iter().find_map(|k| root.get(*k)).unwrap_or(&root);
    let numbers = |key: &str, missing: f64| -> Result<[f64; 6], CliError> {
        let arr = match set.get(key) {
            Some(Value::Array(a)) if a.len() == 6 => a,
            None if key == "errors" => return Ok([missing; 6]),
            _ => return Err(CliError::format(path, format!("expected '{key}' with six entries"))),
        };
        let mut out = [0.0; 6];
        for (o, v) in out.iter_mut().zip(arr) {
            *o = match v {
                Value::Null => missing,
                v => v.as_f64().ok_or_else(|| CliError::format(path, format!("non-numeric entry in '{key}'")))?,
            };
        }
        Ok(out)
    };
    let values = numbers("values", f64::NAN)?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err(CliError::format(path, "coefficient values must be finite"));
    }
    let kind: CoefficientKind = match set.get("kind") {
        Some(k) => serde_json::from_value(k.clone()).map_err(|e| CliError::format(path, e))?,
        None => CoefficientKind::Em,
    };
    let provenance = set
        .get("provenance")
        .and_then(|p| serde_json::from_value(p.clone()).ok())
        .unwrap_or(Provenance::SpectralFit);
    Ok(HeatCoefficientSet { kind, values, errors: numbers("errors", f64::INFINITY)?, provenance })
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TraceRow {
    pub t: f64,
    pub value: f64,
    pub bound: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model_error: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TraceDocument {
    pub samples: Vec<TraceRow>,
}

pub fn load_trace(session: &mut Session, path: &Path) -> Result<Vec<FitSample>, CliError> {
    let data = session.read(path)?;
    let rows: Vec<TraceRow> = if is_json(path) {
        parse_json::<TraceDocument>(path, &data)?.samples
    } else {
        csv::Reader::from_reader(data.as_slice())
            .deserialize()
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::format(path, e))?
    };
    Ok(rows.into_iter().map(|r| FitSample { x: r.t, value: r.value, bound: r.bound }).collect())
}

pub fn load_surface(session: &mut Session, args: &SurfaceArgs) -> Result<(SurfaceModel<f64>, Vec<String>), CliError> {
    let shape = match &args.surface {
        SurfaceSpec::Sphere => Shape::Sphere { radius: args.radius },
        SurfaceSpec::Ellipsoid => Shape::Ellipsoid { a: args.axes[0], b: args.axes[1], c: args.axes[2] },
        SurfaceSpec::Torus => Shape::Torus { major: args.major, minor: args.minor },
        SurfaceSpec::File(path) => {
            let data = session.read(path)?;
            let text = String::from_utf8(data).map_err(|e| CliError::format(path, e))?;
            let file = parse_surface::<f64>(&text)?;
            return Ok((file.model, file.warnings));
        }
    };
    Ok((SurfaceModel::from_shape(shape)?, Vec::new()))
}
