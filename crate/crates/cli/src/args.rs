use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use emcavity::asymptotics::RegulatorKind;
use emcavity::coefficients::CoefficientKind;
use emcavity::spectrum::Family;
use serde::{Serialize, Serializer};

#[derive(Parser, Debug)]
#[command(name = "emcavity", version, about = "Electromagnetic heat-kernel coefficients and cavity mode sums")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Heat-kernel coefficients of a surface with consistency checks.
    Coeffs(CoeffsArgs),
    /// Exact eigenvalues of the ball below a frequency cutoff.
    Modes(ModesArgs),
    /// Heat trace of a mode list on a log-spaced t grid.
    Trace(TraceArgs),
    /// Least-squares coefficients from a heat trace.
    Fit(FitArgs),
    /// Regularized mode sum against the predicted divergences.
    Casimir(CasimirArgs),
    /// Exact coefficient-table relations and boundary trace identities.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OutputArgs {
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

/// `sphere`, `ellipsoid`, `torus` or `file:PATH`.
#[derive(Debug, Clone, PartialEq)]
pub enum SurfaceSpec {
    Sphere,
    Ellipsoid,
    Torus,
    File(PathBuf),
}

impl FromStr for SurfaceSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "sphere" => Ok(Self::Sphere),
            "ellipsoid" => Ok(Self::Ellipsoid),
            "torus" => Ok(Self::Torus),
            _ => match s.strip_prefix("file:") {
                Some(p) if !p.is_empty() => Ok(Self::File(PathBuf::from(p))),
                _ => Err(format!("unknown surface '{s}': expected sphere, ellipsoid, torus or file:PATH")),
            },
        }
    }
}

impl fmt::Display for SurfaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Sphere => write!(f, "sphere"),
            Self::Ellipsoid => write!(f, "ellipsoid"),
            Self::Torus => write!(f, "torus"),
            Self::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl Serialize for SurfaceSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `em` or a form degree `0..=3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Problem(pub CoefficientKind);

impl FromStr for Problem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "em" => Ok(Self(CoefficientKind::Em)),
            "0" | "1" | "2" | "3" => Ok(Self(CoefficientKind::Form(s.parse().expect("digit")))),
            _ => Err(format!("unknown problem '{s}': expected em, 0, 1, 2 or 3")),
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            CoefficientKind::Em => write!(f, "em"),
            CoefficientKind::Form(p) => write!(f, "{p}"),
        }
    }
}

impl Serialize for Problem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Problem {
    /// Ball spectrum families whose union is this problem's spectrum, zero
    /// modes excluded.
    pub fn families(self) -> &'static [Family] {
        use Family::*;
        match self.0 {
            CoefficientKind::Em => &[Te, Tm],
            CoefficientKind::Form(0) => &[Dirichlet],
            CoefficientKind::Form(1) => &[Te, Tm, Dirichlet],
            CoefficientKind::Form(2) => &[Te, Tm, Neumann],
            CoefficientKind::Form(_) => &[Neumann],
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SurfaceArgs {
    #[arg(long, default_value = "sphere")]
    pub surface: SurfaceSpec,
    /// Sphere radius.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// Ellipsoid semi-axes.
    #[arg(long, value_delimiter = ',', num_args = 3, default_values_t = [1.0, 1.3, 1.7])]
    pub axes: Vec<f64>,
    /// Torus radii.
    #[arg(long, default_value_t = 2.0)]
    pub major: f64,
    #[arg(long, default_value_t = 0.5)]
    pub minor: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CoeffsArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// Coefficient set reported as `selected`.
    #[arg(long, default_value = "em")]
    pub p: Problem,
    /// Gauss-Legendre nodes per parameter direction.
    #[arg(long, default_value_t = 32)]
    pub quad_order: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ModesArgs {
    #[arg(long, default_value = "em")]
    pub p: Problem,
    #[arg(long, default_value_t = 60.0)]
    pub omega_max: f64,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct TraceArgs {
    /// Mode list: `.csv` with its `.meta.json` sidecar, or `.json`.
    #[arg(long)]
    pub modes: PathBuf,
    #[arg(long, default_value_t = 0.006)]
    pub t_lo: f64,
    #[arg(long, default_value_t = 0.06)]
    pub t_hi: f64,
    #[arg(long, default_value_t = 40)]
    pub t_points: usize,
    /// Relative truncation tolerance of each trace value.
    #[arg(long, default_value_t = 1e-8)]
    pub rtol: f64,
    /// Coefficient JSON; adds the small-t expansion as a model column.
    #[arg(long)]
    pub coeffs: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FitArgs {
    /// Trace written by `trace`, as `.csv` or `.json`.
    #[arg(long)]
    pub trace: PathBuf,
    /// Fit window; defaults to the range of the trace.
    #[arg(long)]
    pub t_lo: Option<f64>,
    #[arg(long)]
    pub t_hi: Option<f64>,
    /// Coefficients to fit.
    #[arg(long, value_delimiter = ',', default_values_t = [0usize, 1, 2, 3, 4, 5])]
    pub basis: Vec<usize>,
    /// Label of the fitted set.
    #[arg(long, default_value = "em")]
    pub p: Problem,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CasimirArgs {
    #[arg(long)]
    pub modes: PathBuf,
    /// Coefficient JSON written by `coeffs` or `fit`.
    #[arg(long)]
    pub coeffs: PathBuf,
    #[arg(long, default_value_t = 1e-4)]
    pub gamma_lo: f64,
    #[arg(long, default_value_t = 1e-2)]
    pub gamma_hi: f64,
    #[arg(long, default_value_t = 40)]
    pub gamma_points: usize,
    #[arg(long, default_value = "heat")]
    pub regulator: RegulatorArg,
    /// Absolute truncation tolerance of each regularized sum.
    #[arg(long, default_value_t = 1e-3)]
    pub atol: f64,
    /// Standard errors within which the divergent component counts as zero.
    #[arg(long, default_value_t = 1.0)]
    pub sigma_limit: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy)]
pub struct RegulatorArg(pub RegulatorKind);

impl FromStr for RegulatorArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.parse().map(Self).map_err(|e: emcavity::Error| e.to_string())
    }
}

impl Serialize for RegulatorArg {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct VerifyArgs {
    /// Seed for the sample points of the identity checks.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Sample points per surface.
    #[arg(long, default_value_t = 20)]
    pub points: usize,
    #[arg(long, value_delimiter = ',', num_args = 3, default_values_t = [1.0, 1.3, 1.7])]
    pub axes: Vec<f64>,
    #[arg(long, default_value_t = 2.0)]
    pub major: f64,
    #[arg(long, default_value_t = 0.5)]
    pub minor: f64,
    #[arg(long, default_value_t = 64)]
    pub quad_order: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}
