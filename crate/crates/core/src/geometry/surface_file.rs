//! Declarative surface definitions.
//!
//! ```text
//! # torus with ring radius 2 and tube radius 1/2
//! param R = 2
//! param r = R / 4
//! component genus = 1
//! chart
//!   u = 0 .. 2*pi periodic
//!   v = 0 .. 2*pi periodic
//!   x = (R + r*cos(u)) * cos(v)
//!   y = (R + r*cos(u)) * sin(v)
//!   z = r * sin(u)
//!   normal = inward
//! end
//! ```
//!
//! `normal` states whether `r_u × r_v` points into the cavity. Each
//! component lists one or more charts that tile it. A chart may add
//! `derivatives = finite_difference` to bypass symbolic differentiation.
//! Lines starting with `#` are comments. Expressions follow the grammar in
//! [`super::expr`].

use std::collections::BTreeMap;
use std::sync::Arc;

use super::chart::{DerivativeSource, FiniteDifferenceChart, Orientation, ParamDomain, SurfaceChart};
use super::expr::{parse_at, Expr};
use super::model::{Component, DynChart, SurfaceModel};
use super::vec3::Vec3;
use crate::error::{Error, Result};
use crate::Real;

/// Highest derivative order tabulated symbolically.
pub const SYMBOLIC_ORDER: usize = 4;

/// Chart given by expressions; derivatives are differentiated symbolically
/// once at construction.
pub struct ExprChart<T> {
    domain: ParamDomain<T>,
    orientation: Orientation,
    /// `table[i][j]` holds `∂ᵤⁱ∂ᵥʲ` of the three coordinates.
    table: Vec<Vec<[Arc<Expr>; 3]>>,
}

impl<T: Real> ExprChart<T> {
    pub fn new(coords: [Arc<Expr>; 3], domain: ParamDomain<T>, orientation: Orientation) -> Self {
        let mut table: Vec<Vec<[Arc<Expr>; 3]>> = Vec::new();
        for i in 0..=SYMBOLIC_ORDER {
            let mut row: Vec<[Arc<Expr>; 3]> = Vec::new();
            for j in 0..=(SYMBOLIC_ORDER - i) {
                let entry = if j > 0 {
                    row[j - 1].clone().map(|e| e.derivative(1))
                } else if i > 0 {
                    table[i - 1][0].clone().map(|e| e.derivative(0))
                } else {
                    coords.clone()
                };
                row.push(entry);
            }
            table.push(row);
        }
        Self { domain, orientation, table }
    }
}

impl<T: Real> SurfaceChart<T> for ExprChart<T> {
    fn domain(&self) -> ParamDomain<T> {
        self.domain
    }
    fn orientation(&self) -> Orientation {
        self.orientation
    }
    fn max_order(&self) -> usize {
        SYMBOLIC_ORDER
    }
    fn partial(&self, i: usize, j: usize, u: T, v: T) -> Vec3<T> {
        match self.table.get(i).and_then(|r| r.get(j)) {
            Some([x, y, z]) => Vec3::new(x.eval(u, v), y.eval(u, v), z.eval(u, v)),
            None => Vec3::new(T::nan(), T::nan(), T::nan()),
        }
    }
}

/// A parsed surface file.
pub struct SurfaceFile<T> {
    pub model: SurfaceModel<T>,
    pub params: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
}

#[derive(Default)]
struct ChartDraft {
    line: usize,
    u: Option<((f64, f64), bool)>,
    v: Option<((f64, f64), bool)>,
    coords: [Option<Arc<Expr>>; 3],
    normal: Option<Orientation>,
    source: Option<DerivativeSource>,
}

fn perr<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, column, message: message.into() })
}

fn column_of(line: &str, sub: &str) -> usize {
    (sub.as_ptr() as usize).saturating_sub(line.as_ptr() as usize)
}

/// Parses the text of a surface file.
pub fn parse_surface<T: Real>(text: &str) -> Result<SurfaceFile<T>> {
    let mut params = BTreeMap::new();
    let mut components: Vec<(u32, Vec<ChartDraft>, usize)> = Vec::new();
    let mut current: Option<ChartDraft> = None;
    let mut warnings = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let body = line.trim();
        if body.is_empty() {
            continue;
        }
        let col = column_of(raw, body);
        let (key, rest) = match body.find(|ch: char| ch.is_whitespace() || ch == '=') {
            Some(k) => (&body[..k], body[k..].trim_start()),
            None => (body, ""),
        };

        if let Some(chart) = current.as_mut() {
            match key {
                "end" => {
                    let chart = current.take().unwrap();
                    match components.last_mut() {
                        Some(c) => c.1.push(chart),
                        None => return perr(ln, col + 1, "chart outside a component"),
                    }
                    continue;
                }
                "u" | "v" | "x" | "y" | "z" | "normal" | "derivatives" => {}
                _ => return perr(ln, col + 1, format!("unknown chart key '{key}'")),
            }
            let Some(value) = rest.strip_prefix('=') else {
                return perr(ln, col + key.len() + 1, "expected '='");
            };
            let value = value.trim();
            let vcol = column_of(raw, value);
            match key {
                "u" | "v" => {
                    let (range, periodic) = match value.strip_suffix("periodic") {
                        Some(r) => (r.trim_end(), true),
                        None => (value, false),
                    };
                    let Some(dots) = range.find("..") else {
                        return perr(ln, vcol + 1, "expected 'a .. b'");
                    };
                    let (a, b) = (&range[..dots], &range[dots + 2..]);
                    let ea = parse_at(a, ln, vcol, &params, false)?.eval::<f64>(0.0, 0.0);
                    let eb = parse_at(b, ln, vcol + dots + 2, &params, false)?.eval::<f64>(0.0, 0.0);
                    if !(eb > ea) {
                        return perr(ln, vcol + 1, "empty parameter range");
                    }
                    let slot = if key == "u" { &mut chart.u } else { &mut chart.v };
                    *slot = Some(((ea, eb), periodic));
                }
                "x" | "y" | "z" => {
                    let k = (key.as_bytes()[0] - b'x') as usize;
                    chart.coords[k] = Some(parse_at(value, ln, vcol, &params, true)?);
                }
                "normal" => {
                    chart.normal = Some(match value {
                        "inward" => Orientation::Inward,
                        "outward" => Orientation::Outward,
                        _ => return perr(ln, vcol + 1, "normal must be 'inward' or 'outward'"),
                    })
                }
                _ => {
                    chart.source = Some(match value {
                        "symbolic" => DerivativeSource::Exact,
                        "finite_difference" => DerivativeSource::FiniteDifference,
                        _ => return perr(ln, vcol + 1, "derivatives must be 'symbolic' or 'finite_difference'"),
                    })
                }
            }
            continue;
        }

        match key {
            "param" => {
                let Some(eq) = rest.find('=') else {
                    return perr(ln, col + 1, "expected 'param NAME = expr'");
                };
                let name = rest[..eq].trim();
                if name.is_empty()
                    || !name.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
                    || name.starts_with(|ch: char| ch.is_ascii_digit())
                    || matches!(name, "u" | "v" | "pi" | "sin" | "cos" | "sinh" | "cosh" | "exp" | "sqrt")
                {
                    return perr(ln, column_of(raw, rest) + 1, format!("invalid parameter name '{name}'"));
                }
                let expr_text = &rest[eq + 1..];
                let value = parse_at(expr_text, ln, column_of(raw, expr_text), &params, false)?.eval::<f64>(0.0, 0.0);
                params.insert(name.to_string(), value);
            }
            "component" => {
                let spec: String = rest.chars().filter(|ch| !ch.is_whitespace()).collect();
                let Some(g) = spec.strip_prefix("genus=") else {
                    return perr(ln, col + 1, "expected 'component genus = G'");
                };
                let genus = g.parse::<u32>().or_else(|_| perr(ln, col + 1, format!("invalid genus '{g}'")))?;
                components.push((genus, Vec::new(), ln));
            }
            "chart" => {
                if components.is_empty() {
                    return perr(ln, col + 1, "chart outside a component");
                }
                current = Some(ChartDraft { line: ln, ..Default::default() });
            }
            _ => return perr(ln, col + 1, format!("unknown directive '{key}'")),
        }
    }
    if let Some(c) = current {
        return perr(c.line, 1, "chart not closed with 'end'");
    }
    if components.is_empty() {
        return perr(1, 1, "no components declared");
    }

    let mut built = Vec::new();
    for (genus, drafts, ln) in components {
        if drafts.is_empty() {
            return perr(ln, 1, "component without charts");
        }
        let mut charts: Vec<DynChart<T>> = Vec::new();
        for d in drafts {
            let missing = |what: &str| perr::<()>(d.line, 1, format!("chart missing '{what}'"));
            let Some(((u0, u1), pu)) = d.u else { return missing("u").map(|_| unreachable!()) };
            let Some(((v0, v1), pv)) = d.v else { return missing("v").map(|_| unreachable!()) };
            let Some(orientation) = d.normal else { return missing("normal").map(|_| unreachable!()) };
            let [Some(x), Some(y), Some(z)] = d.coords else {
                return missing("x, y and z").map(|_| unreachable!());
            };
            let domain = ParamDomain {
                u: (T::lit(u0), T::lit(u1)),
                v: (T::lit(v0), T::lit(v1)),
                periodic: [pu, pv],
            };
            let chart = ExprChart::new([x, y, z], domain, orientation);
            if d.source == Some(DerivativeSource::FiniteDifference) {
                warnings.push(format!(
                    "chart at line {}: derivatives from finite differences, accuracy limited",
                    d.line
                ));
                let embed = move |u: T, v: T| chart.point(u, v);
                charts.push(Arc::new(FiniteDifferenceChart::new(embed, domain, orientation)));
            } else {
                charts.push(Arc::new(chart));
            }
        }
        built.push(Component { charts, genus });
    }
    Ok(SurfaceFile { model: SurfaceModel::new("file", built)?, params, warnings })
}
