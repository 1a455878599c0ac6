use emcavity::coefficients::{em_coefficients, form_coefficients, GeometricMoments};
use emcavity::geometry::TopologyInfo;
use emcavity::spectrum::*;

/// `(family, l, radial index, root)` at 22 digits.
const ROOTS: &[(Family, u32, usize, f64)] = &[
    (Family::Dirichlet, 0, 1, 3.141592653589793238463),
    (Family::Dirichlet, 0, 3, 9.424777960769379715388),
    (Family::Dirichlet, 1, 1, 4.493409457909064175308),
    (Family::Dirichlet, 5, 3, 16.35470963935046318205),
    (Family::Dirichlet, 40, 1, 47.17350087447835357753),
    (Family::Dirichlet, 200, 2, 220.0294475671860838825),
    (Family::Dirichlet, 1000, 1, 1019.163956170334774675),
    (Family::Dirichlet, 1000, 7, 1082.105246176152147888),
    (Family::Tm, 1, 1, 2.743707269992269382561),
    (Family::Tm, 3, 2, 8.72175051348994147412),
    (Family::Tm, 50, 1, 53.59183924906470679467),
    (Family::Tm, 300, 3, 326.7855877772336184211),
    (Family::Neumann, 1, 1, 2.081575977818100610538),
    (Family::Neumann, 2, 1, 3.342093657365694158827),
    (Family::Neumann, 30, 4, 48.03339943889380992125),
];

#[test]
fn roots_match_high_precision_values() {
    let all = ball_modes_for(1.0_f64, 1100.0, &[Family::Dirichlet, Family::Tm, Family::Neumann]).unwrap();
    for &(family, l, m, want) in ROOTS {
        let mode = all
            .entries()
            .iter()
            .find(|e| e.family == family && e.l == l && e.m as usize == m)
            .unwrap_or_else(|| panic!("{family} l = {l} m = {m} missing"));
        let rel = (mode.omega() - want).abs() / want;
        assert!(rel <= 1e-13, "{family} l = {l} m = {m}: {} vs {want} ({rel:e})", mode.omega());
        assert_eq!(mode.multiplicity, 2 * l + 1);
    }
}

#[test]
fn lowest_modes_of_each_problem() {
    let d = dirichlet_modes(1.0_f64, 10.0).unwrap();
    assert!((d.entries()[0].lambda - std::f64::consts::PI.powi(2)).abs() < 1e-13);
    let n = neumann_modes(1.0_f64, 10.0).unwrap();
    assert!(n.entries().iter().all(|e| e.lambda > 0.0));
    assert_eq!((n.entries()[0].family, n.entries()[0].l), (Family::Neumann, 1));
    assert!((n.entries()[0].omega() - 2.081575977818101).abs() < 1e-13);
    let l0 = n.entries().iter().find(|e| e.l == 0).unwrap();
    assert!((l0.omega() - 4.493409457909064).abs() < 1e-13);

    let em = em_modes(1.0_f64, 10.0).unwrap();
    let first = em.entries()[0];
    assert_eq!((first.family, first.l, first.multiplicity), (Family::Tm, 1, 3));
    assert!((first.omega() - 2.743707269992269).abs() < 1e-13);
    let te = em.entries().iter().find(|e| e.family == Family::Te).unwrap();
    assert!((te.omega() - 4.493409457909064).abs() < 1e-13);
    assert!(em.entries().iter().all(|e| e.l >= 1));
}

#[test]
fn radius_scaling_divides_eigenvalues() {
    let one = dirichlet_modes(1.0_f64, 30.0).unwrap();
    let two = dirichlet_modes(2.0_f64, 15.0).unwrap();
    assert_eq!(one.len(), two.len());
    for (a, b) in one.entries().iter().zip(two.entries()) {
        assert_eq!((a.l, a.m), (b.l, b.m));
        assert!((a.lambda / 4.0 - b.lambda).abs() <= 1e-14 * a.lambda);
    }
    let r1 = resolvent2_trace(&em_modes(1.0_f64, 200.0).unwrap(), 40.0, 1.0).unwrap();
    let r2 = resolvent2_trace(&em_modes(2.0_f64, 100.0).unwrap(), 10.0, 1.0).unwrap();
    assert!((r2.value - 16.0 * r1.value).abs() < 1e-12 * r2.value);
}

#[test]
fn counting_function_follows_weyl() {
    let em = em_modes(1.0_f64, 80.0).unwrap();
    for w in [20.0, 40.0, 80.0] {
        assert!(weyl_deviation(&em, w).abs() < 0.05, "EM at {w}");
    }
    // Scalar problems carry the surface term ∓|∂Ω|ω²/(16π) = ∓ω²/4.
    for (modes, sign) in [(dirichlet_modes(1.0_f64, 80.0).unwrap(), -1.0), (neumann_modes(1.0, 80.0).unwrap(), 1.0)] {
        for w in [20.0, 40.0, 80.0] {
            let leading = 2.0 * w * w * w / (9.0 * std::f64::consts::PI);
            let surface = sign * w * w / 4.0;
            let n = modes.counting_function(w) as f64;
            assert!(((n - leading - surface) / leading).abs() < 0.05, "{:?} at {w}", modes.families());
        }
    }
}

#[test]
fn mode_count_at_sixty() {
    let em = em_modes(1.0_f64, 60.0).unwrap();
    let total = em.multiplicity_total();
    assert!((30_000..31_000).contains(&total), "{total}");
}

#[test]
fn heat_trace_tracks_the_coefficients() {
    let ball = GeometricMoments::<f64>::ball(1.0);
    let a = em_coefficients(&ball, &TopologyInfo::connected(0)).unwrap().values;
    let modes = em_modes(1.0_f64, 60.0).unwrap();
    let mut last = f64::INFINITY;
    for t in [0.01, 0.02, 0.05, 0.1] {
        let k = heat_trace(&modes, t, 1e-8).unwrap();
        let terms: Vec<f64> = (0..6).map(|n| a[n] * t.powf((n as f64 - 3.0) / 2.0)).collect();
        let predicted: f64 = terms.iter().sum();
        let allowance = k.bound + terms[5].abs() * t.sqrt();
        assert!((k.value - predicted).abs() <= allowance, "t = {t}: {} vs {predicted}", k.value);
        assert!(k.value < last);
        last = k.value;
    }
}

#[test]
fn small_t_beyond_the_cutoff_is_refused() {
    let modes = em_modes(1.0_f64, 60.0).unwrap();
    match heat_trace(&modes, 1e-4, 1e-10) {
        Err(emcavity::Error::CutoffTooLow { minimum, .. }) => {
            assert!(minimum > 1e-4);
            assert!(heat_trace(&modes, minimum * 1.01, 1e-10).is_ok());
        }
        other => panic!("expected cutoff error, got {other:?}"),
    }
}

#[test]
fn union_with_scalar_list_gives_form_spectrum() {
    // p = 1 spectrum as EM ⊎ Dirichlet: its heat trace follows a^{(1)}.
    let ball = GeometricMoments::<f64>::ball(1.0);
    let a1 = form_coefficients(1, &ball).unwrap().values;
    let em = em_modes(1.0_f64, 60.0).unwrap();
    let union = em.union(&dirichlet_modes(1.0, 60.0).unwrap()).unwrap();
    assert_eq!(union.len(), em.len() + dirichlet_modes(1.0_f64, 60.0).unwrap().len());
    let t = 0.02;
    let k = heat_trace(&union, t, 1e-8).unwrap();
    let predicted: f64 = (0..6).map(|n| a1[n] * t.powf((n as f64 - 3.0) / 2.0)).sum();
    assert!((k.value - predicted).abs() < 1e-3, "{} vs {predicted}", k.value);
}

#[test]
fn csv_export_round_trips_through_sidecar() {
    let modes = em_modes(1.0_f64, 25.0).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("modes.csv");
    modes.write_csv(std::fs::File::create(&csv_path).unwrap()).unwrap();
    let meta_json = serde_json::to_string(&modes.meta()).unwrap();
    let meta: ModeListMeta = serde_json::from_str(&meta_json).unwrap();
    let back = ModeList::<f64>::read_csv(std::fs::File::open(&csv_path).unwrap(), &meta).unwrap();
    assert_eq!(back, modes);
}
