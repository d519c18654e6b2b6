use pseudoherm_core::discretize::{assemble_matrix, eigs, EigenKind};
use pseudoherm_core::verify::checks::{self, grid_for, probe_residuals, resolve_metric};
use pseudoherm_core::verify::{
    convergence_study, run_suite, GridSpec, NumericConfig, SpectrumOutcome, StudyTarget,
};
use pseudoherm_core::{model, ModelParams};

fn p1() -> ModelParams {
    ModelParams::new(1.0, -0.5, 0.5, 1.0, 1.0, 0.0).unwrap()
}

fn p2() -> ModelParams {
    ModelParams::new(2.0, 0.1, 0.4, 1.0, 1.0, 0.0).unwrap()
}

#[test]
fn residual_drops_by_two_to_the_fourth() {
    let probes = checks::default_probes();
    let metric = resolve_metric(&p1(), None).unwrap();
    let coarse = probe_residuals(
        &p1(),
        &grid_for(&p1(), 501, 10.0).unwrap(),
        4,
        &probes,
        &metric,
    )
    .unwrap()
    .max();
    let fine = probe_residuals(
        &p1(),
        &grid_for(&p1(), 1001, 10.0).unwrap(),
        4,
        &probes,
        &metric,
    )
    .unwrap()
    .max();
    let ratio = coarse / fine;
    assert!((10.0..24.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn ground_energy_order_is_about_four() {
    let grids = [501, 1001, 2001].map(|n| GridSpec { n, p_max: 10.0 });
    let s = convergence_study(&p1(), &grids, StudyTarget::GroundEnergy, 4).unwrap();
    assert!(s.result.passed, "{}", s.result.details);
    for o in &s.orders {
        assert!((3.5..4.5).contains(o), "{:?}", s.orders);
    }
}

#[test]
fn reference_spectra() {
    let g = grid_for(&p2(), 1001, 10.0).unwrap();
    let s = checks::check_spectrum(&p2(), &g, 4, 1);
    assert_eq!(s.outcome, SpectrumOutcome::Compared);
    let e0 = s.spectrum.unwrap().values[0];
    assert!((e0.re - 0.97980).abs() < 1e-4, "{e0}");
    assert!((e0.re - 0.5 * 3.84f64.sqrt()).abs() < 1e-6, "{e0}");
}

#[test]
fn general_spectrum_of_h0_is_nearly_real() {
    let g = grid_for(&p1(), 401, 8.0).unwrap();
    let (_, h0) = model::h0_momentum(&p1()).unwrap();
    let a = assemble_matrix(&h0, &g, 4).unwrap();
    let s = eigs(&a, EigenKind::General, 4).unwrap();
    for (n, e) in s.values.iter().enumerate() {
        assert!(e.im.abs() < 1e-6 * e.re.abs(), "{e}");
        assert!((e.re - (n as f64 + 0.5) * 2f64.sqrt()).abs() < 1e-3, "{e}");
    }
}

#[test]
fn deformed_suite_symbolic_checks_pass() {
    let params = p1().with_beta(0.1).unwrap();
    let cfg = NumericConfig {
        n: 401,
        draws: 10,
        ..Default::default()
    };
    let r = run_suite(&params, &cfg).unwrap();
    for name in [
        "pseudo_hermiticity_deformed",
        "deformed_position_symmetric",
        "pseudo_hermiticity_gaussian",
        "expansion",
        "identity_fuzz",
    ] {
        let c = r.check(name).unwrap_or_else(|| panic!("missing {name}"));
        assert!(c.passed, "{c:?}");
    }
    let reality = r.check("spectrum_reality").unwrap();
    assert!(reality.residual.is_finite());
    assert!(r.check("imaginary_parts_convergence").is_some());
    assert!(r.spectra.iter().any(|s| s.oracle.is_none()));
}

#[test]
fn suite_is_deterministic() {
    let cfg = NumericConfig {
        n: 201,
        draws: 20,
        seed: 9,
        ..Default::default()
    };
    let a = run_suite(&p2(), &cfg).unwrap();
    let b = run_suite(&p2(), &cfg).unwrap();
    assert_eq!(a.checks, b.checks);
    assert_eq!(a.spectra, b.spectra);
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    for c in &a.checks {
        assert!(c.residual >= 0.0 && c.residual.is_finite());
        assert_eq!(c.passed, c.residual <= c.tolerance);
    }
}

#[test]
fn hermitian_params_use_identity_metric() {
    let p = ModelParams::new(1.0, 0.3, 0.3, 1.0, 1.0, 0.0).unwrap();
    let c = checks::check_pseudo_symbolic(&p, None);
    assert!(c.passed);
    assert!(c.details.contains("identity exponent 0"), "{}", c.details);
    let r = run_suite(
        &p,
        &NumericConfig {
            n: 401,
            draws: 5,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(r.passed(), "{:?}", r.failing().collect::<Vec<_>>());
    assert!(r.check("hermitian_case").unwrap().passed);
}
