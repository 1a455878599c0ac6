use emcavity::asymptotics::{
    divergence_prediction, fit_coefficients, heat_expansion, log_grid, mode_count, phi_expansion, regulator_integral,
    remainder_scan, FitConfig, FitKind, ScanOptions, CONDITION_WARNING,
};
use emcavity::coefficients::{coefficient_report, consistency_report, compute_moments, CoefficientKind};
use emcavity::coefficients::report::gauss_bonnet_check;
use emcavity::geometry::identities::{adapted_frame_inputs, boundary_identity_residuals, default_fd_step, evaluate_identities};
use emcavity::geometry::{QuadratureSpec, Shape, SurfaceModel, TopologyInfo};
use emcavity::spectrum::{ball_modes_for, heat_trace_series, ModeList};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::args::{CasimirArgs, CoeffsArgs, FitArgs, Format, ModesArgs, TraceArgs, VerifyArgs};
use crate::error::CliError;
use crate::inputs::{load_coefficients, load_modes, load_surface, load_trace, ModesDocument, TraceDocument, TraceRow};
use crate::manifest::Session;

/// Residual bound for the finite-difference identity checks.
const IDENTITY_TOLERANCE: f64 = 1e-6;
/// Gauss-Bonnet residual bound in `verify`.
const GAUSS_BONNET_TOLERANCE: f64 = 1e-8;
/// Fraction of a non-periodic parameter range kept clear of its ends.
const SAMPLE_MARGIN: f64 = 0.1;

fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Usage(format!("csv: {e}")))?;
    }
    w.into_inner().map_err(|e| CliError::Usage(format!("csv: {e}")))
}

fn check_window(name: &str, lo: f64, hi: f64, points: usize) -> Result<(), CliError> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) || points < 2 {
        return Err(CliError::Usage(format!("--{name}-lo/--{name}-hi/--{name}-points: need 0 < lo < hi and at least 2 points")));
    }
    Ok(())
}

pub fn coeffs(args: &CoeffsArgs) -> Result<(), CliError> {
    let mut s = Session::new("coeffs", args, &args.output.out)?;
    let (model, warnings) = load_surface(&mut s, &args.surface)?;
    let quad = QuadratureSpec::uniform(args.quad_order);
    let report = coefficient_report(&model, &quad)?;
    let quad_error = report.moments.iter().map(|m| m.error).fold(0.0, f64::max);
    s.stage("moments", quad_error, "largest quadrature error estimate of a curvature moment");
    s.stage("gauss_bonnet", report.gauss_bonnet.residual.abs(), "residual of (det L) against 4pi(1 - g)");
    let selected = match args.p.0 {
        CoefficientKind::Em => report.em,
        CoefficientKind::Form(p) => report.forms[p as usize],
    };
    let count = match model.topology().components {
        1 => Some(mode_count(report.a3_local.value, model.topology())?),
        _ => None,
    };
    let doc = json!({
        "schema_version": crate::manifest::SCHEMA_VERSION,
        "warnings": warnings,
        "selected": selected,
        "phi_expansion": phi_expansion(&report.em),
        "mode_count": count,
        "report": report,
    });
    s.write_json("coeffs.json", &doc)?;
    if args.output.format == Format::Csv {
        #[derive(Serialize)]
        struct Row {
            set: String,
            n: usize,
            value: f64,
            error: f64,
        }
        let rows: Vec<Row> = std::iter::once(&report.em)
            .chain(&report.forms)
            .flat_map(|c| (0..6).map(move |n| Row { set: c.kind.to_string(), n, value: c.values[n], error: c.errors[n] }))
            .collect();
        s.write("coeffs.csv", &csv_bytes(&rows)?)?;
    }
    s.finish()?;
    if !report.passed() {
        let failed: Vec<_> = report.table_consistency.failures().map(|f| f.name.clone()).collect();
        return Err(CliError::Tolerance {
            summary: "coefficient consistency checks failed".into(),
            details: json!({
                "table_failures": failed,
                "numeric_consistency_passed": report.numeric_consistency_passed,
                "gauss_bonnet": report.gauss_bonnet,
            }),
        });
    }
    Ok(())
}

pub fn modes(args: &ModesArgs) -> Result<(), CliError> {
    let mut s = Session::new("modes", args, &args.output.out)?;
    let list = ball_modes_for(args.radius, args.omega_max, args.p.families())?;
    s.stage("roots", list.root_accuracy(), "relative accuracy of every eigenvalue");
    let meta = list.meta();
    match args.output.format {
        Format::Csv => {
            let mut buf = Vec::new();
            list.write_csv(&mut buf)?;
            s.write("modes.csv", &buf)?;
            s.write_json("modes.meta.json", &meta)?;
        }
        Format::Json => {
            s.write_json("modes.json", &ModesDocument { meta, entries: list.entries().to_vec() })?;
        }
    }
    s.finish()
}

pub fn trace(args: &TraceArgs) -> Result<(), CliError> {
    check_window("t", args.t_lo, args.t_hi, args.t_points)?;
    let mut s = Session::new("trace", args, &args.output.out)?;
    let list: ModeList<f64> = load_modes(&mut s, &args.modes)?;
    let coefficients = args.coeffs.as_deref().map(|p| load_coefficients(&mut s, p)).transpose()?;
    let samples = heat_trace_series(&list, &log_grid(args.t_lo, args.t_hi, args.t_points), args.rtol)?;
    let worst = samples.iter().map(|x| x.bound / x.value.abs()).fold(0.0, f64::max);
    s.stage("heat_trace", worst, "largest relative truncation bound");
    let rows: Vec<TraceRow> = samples
        .iter()
        .map(|x| {
            let model = coefficients.as_ref().map(|a| heat_expansion(a, x.t));
            TraceRow { t: x.t, value: x.value, bound: x.bound, model: model.map(|m| m.0), model_error: model.map(|m| m.1) }
        })
        .collect();
    match args.output.format {
        Format::Csv => {
            s.write("trace.csv", &csv_bytes(&rows)?)?;
        }
        Format::Json => {
            s.write_json("trace.json", &TraceDocument { samples: rows })?;
        }
    }
    s.finish()
}

pub fn fit(args: &FitArgs) -> Result<(), CliError> {
    let mut s = Session::new("fit", args, &args.output.out)?;
    let samples = load_trace(&mut s, &args.trace)?;
    let (lo0, hi0) = samples.iter().fold((f64::INFINITY, 0.0_f64), |(lo, hi), x| (lo.min(x.x), hi.max(x.x)));
    let (lo, hi) = (args.t_lo.unwrap_or(lo0), args.t_hi.unwrap_or(hi0));
    let inside: Vec<_> = samples.into_iter().filter(|x| x.x >= lo * (1.0 - 1e-12) && x.x <= hi * (1.0 + 1e-12)).collect();
    let config = FitConfig { kind: FitKind::Heat, lo, hi, points: inside.len(), basis: args.basis.clone(), pinned: Vec::new() };
    let result = fit_coefficients(&inside, &config)?;
    s.stage("fit", result.residual_norm, "sqrt(chi2/dof) of the weighted fit");
    if result.ill_conditioned {
        eprintln!("{}", json!({"status": "warning", "kind": "ill_conditioned", "condition_number": result.condition_number, "threshold": CONDITION_WARNING}));
    }
    let doc = json!({
        "schema_version": crate::manifest::SCHEMA_VERSION,
        "fit": result,
        "set": result.to_set(args.p.0),
    });
    s.write_json("fit.json", &doc)?;
    s.finish()
}

pub fn casimir(args: &CasimirArgs) -> Result<(), CliError> {
    check_window("gamma", args.gamma_lo, args.gamma_hi, args.gamma_points)?;
    let mut s = Session::new("casimir", args, &args.output.out)?;
    let list: ModeList<f64> = load_modes(&mut s, &args.modes)?;
    let a = load_coefficients(&mut s, &args.coeffs)?;
    let prediction = divergence_prediction(&a, args.regulator.0);
    let options = ScanOptions { atol: args.atol, sigma_limit: args.sigma_limit };
    let scan = remainder_scan(&list, &prediction, &log_grid(args.gamma_lo, args.gamma_hi, args.gamma_points), options)?;
    let worst = scan.points.iter().map(|p| p.bound).fold(0.0, f64::max);
    s.stage("regularized_sum", worst, "largest truncation bound of S(gamma)");
    s.stage("remainder_fit", scan.divergent().std_error, "standard error of the gamma^-1/2 component");
    let table = (0..=4).map(|n| regulator_integral(n, 1e-6, 1.0)).collect::<Result<Vec<_>, _>>()?;
    let doc = json!({
        "schema_version": crate::manifest::SCHEMA_VERSION,
        "regulator": args.regulator,
        "scan": scan,
        "regulator_integrals": table,
    });
    s.write_json("casimir.json", &doc)?;
    if args.output.format == Format::Csv {
        s.write("scan.csv", &csv_bytes(&scan.points)?)?;
    }
    s.finish()?;
    if !scan.finite {
        let d = scan.divergent();
        return Err(CliError::Tolerance {
            summary: format!("gamma^-1/2 component {:e} is {:.1} standard errors from zero", d.value, scan.divergent_sigmas),
            details: json!({ "divergent": d, "sigmas": scan.divergent_sigmas, "sigma_limit": scan.sigma_limit }),
        });
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct Check {
    name: String,
    passed: bool,
    residual: String,
    tolerance: String,
}

fn sample_points(model: &SurfaceModel<f64>, n: usize, rng: &mut ChaCha8Rng) -> Vec<(f64, f64)> {
    let chart = model.charts().next().expect("model has a chart");
    let d = chart.domain();
    let pick = |rng: &mut ChaCha8Rng, (a, b): (f64, f64), periodic: bool| {
        let m = if periodic { 0.0 } else { SAMPLE_MARGIN };
        a + (b - a) * (m + (1.0 - 2.0 * m) * rng.gen::<f64>())
    };
    (0..n).map(|_| (pick(rng, d.u, d.periodic[0]), pick(rng, d.v, d.periodic[1]))).collect()
}

pub fn verify(args: &VerifyArgs) -> Result<(), CliError> {
    let mut s = Session::new("verify", args, &args.output.out)?;
    let mut checks = Vec::new();

    for genus in [0, 1] {
        for r in consistency_report(&TopologyInfo::connected(genus)).relations {
            checks.push(Check { name: format!("g={genus}: {}", r.name), passed: r.passed, residual: r.residual, tolerance: "0".into() });
        }
    }

    type Q = Ratio<i64>;
    let q = |n: i64, d: i64| Q::new(n, d);
    let zero3 = [[[q(0, 1); 2]; 2]; 2];
    let zero4 = [[[[q(0, 1); 2]; 2]; 2]; 2];
    for (label, k) in [("sphere R=1", q(1, 1)), ("sphere R=2", q(1, 2)), ("plane", q(0, 1))] {
        let l = [[k, q(0, 1)], [q(0, 1), k]];
        for e in evaluate_identities(&adapted_frame_inputs(l, zero3, zero4)) {
            checks.push(Check {
                name: format!("{label} exact: {}", e.name),
                passed: e.residual == q(0, 1),
                residual: e.residual.to_string(),
                tolerance: "0".into(),
            });
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let shapes = [
        ("ellipsoid", Shape::Ellipsoid { a: args.axes[0], b: args.axes[1], c: args.axes[2] }),
        ("torus", Shape::Torus { major: args.major, minor: args.minor }),
    ];
    let mut worst_identity = 0.0_f64;
    for (label, shape) in shapes {
        let model = SurfaceModel::from_shape(shape)?;
        let chart = model.charts().next().expect("model has a chart").clone();
        let mut worst = 0.0_f64;
        let mut failures = Vec::new();
        for (u, v) in sample_points(&model, args.points, &mut rng) {
            let rep = boundary_identity_residuals(&*chart, u, v, default_fd_step(&*chart))?;
            worst = worst.max(rep.max_residual());
            if rep.max_residual() >= IDENTITY_TOLERANCE || rep.check().is_err() {
                failures.push([u, v]);
            }
        }
        worst_identity = worst_identity.max(worst);
        checks.push(Check {
            name: format!("{label}: boundary identities at {} points (failing: {:?})", args.points, failures),
            passed: failures.is_empty(),
            residual: format!("{worst:e}"),
            tolerance: format!("{IDENTITY_TOLERANCE:e}"),
        });
    }
    s.stage("identities", worst_identity, "largest finite-difference identity residual");

    let quad = QuadratureSpec::uniform(args.quad_order);
    let mut worst_gb = 0.0_f64;
    for (label, shape) in [
        ("sphere", Shape::Sphere { radius: 1.0 }),
        ("ellipsoid", Shape::Ellipsoid { a: args.axes[0], b: args.axes[1], c: args.axes[2] }),
        ("torus", Shape::Torus { major: args.major, minor: args.minor }),
    ] {
        let model = SurfaceModel::from_shape(shape)?;
        let gb = gauss_bonnet_check(&compute_moments(&model, &quad)?, model.topology());
        worst_gb = worst_gb.max(gb.residual.abs());
        checks.push(Check {
            name: format!("{label}: Gauss-Bonnet"),
            passed: gb.residual.abs() <= GAUSS_BONNET_TOLERANCE,
            residual: format!("{:e}", gb.residual),
            tolerance: format!("{GAUSS_BONNET_TOLERANCE:e}"),
        });
    }
    s.stage("gauss_bonnet", worst_gb, "largest Gauss-Bonnet residual");

    let passed = checks.iter().all(|c| c.passed);
    let doc = json!({ "schema_version": crate::manifest::SCHEMA_VERSION, "passed": passed, "checks": checks });
    s.write_json("verify.json", &doc)?;
    s.finish()?;
    if !passed {
        let failed: Vec<_> = checks.iter().filter(|c| !c.passed).map(|c| &c.name).collect();
        return Err(CliError::Tolerance { summary: format!("{} verification checks failed", failed.len()), details: json!({ "failed": failed }) });
    }
    Ok(())
}
