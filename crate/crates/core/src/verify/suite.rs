//! The full check suite for one parameter set.
//!
//! Checks run as independent jobs and are merged into the report sorted by
//! check name. Spectra are sorted by label.

use std::time::{Duration, Instant};

use serde::Serialize;

use super::checks::{self, ProbeSpec, SYMBOLIC_TOL};
use super::convergence::{self, StudyTarget};
use super::draws;
use super::report::{CheckResult, Report, SpectrumRecord};
use crate::discretize::Spectrum;
use crate::error::{DiscretizeError, VerifyError};
use crate::model::{self, ModelParams};
use crate::par::{self, Exec};

/// `β` used for the metric-limit check inside a suite run.
pub const SUITE_LIMIT_BETA: f64 = 1e-6;
/// `|p|` range of the metric-limit check inside a suite run.
pub const SUITE_LIMIT_RANGE: f64 = 5.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumericConfig {
    pub n: usize,
    pub p_max: f64,
    pub fd_order: usize,
    pub levels: usize,
    pub probes: Vec<ProbeSpec>,
    pub seed: u64,
    /// Random parameter draws for the identity fuzzer.
    pub draws: usize,
    /// Replaces the metric exponent (negative control).
    pub exponent_override: Option<f64>,
    /// Skip every grid-based check when false.
    pub numeric: bool,
}

impl Default for NumericConfig {
    fn default() -> Self {
        Self {
            n: 1001,
            p_max: 10.0,
            fd_order: 4,
            levels: 6,
            probes: checks::default_probes(),
            seed: 42,
            draws: 100,
            exponent_override: None,
            numeric: true,
        }
    }
}

impl NumericConfig {
    pub fn validate(&self) -> Result<(), VerifyError> {
        if self.n.is_multiple_of(2) || self.n < 5 {
            return Err(DiscretizeError::GridSize(self.n).into());
        }
        if !(self.p_max > 0.0 && self.p_max.is_finite()) {
            return Err(DiscretizeError::GridExtent(self.p_max).into());
        }
        if self.fd_order != 2 && self.fd_order != 4 {
            return Err(DiscretizeError::FdOrder(self.fd_order).into());
        }
        if self.levels == 0 {
            return Err(VerifyError::Precondition(
                "levels must be at least 1".into(),
            ));
        }
        if let Some(p) = self
            .probes
            .iter()
            .find(|p| p.width.is_nan() || p.width <= 0.0)
        {
            return Err(DiscretizeError::ProbeWidth(p.width).into());
        }
        if let Some(e) = self.exponent_override {
            if !e.is_finite() {
                return Err(VerifyError::Precondition(format!(
                    "exponent override must be finite, got {e}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Job {
    Expansion,
    Ladder,
    BfDiscrepancy,
    MomentumForm,
    Adjoint,
    PseudoGaussian,
    PseudoDeformed,
    DeformedPosition,
    HermitianCase,
    MetricLimit,
    Fuzz,
    NumericResidual,
    ResidualConvergence,
    Spectrum,
    RealityConvergence,
}

#[derive(Default)]
struct JobOutput {
    checks: Vec<CheckResult>,
    spectra: Vec<SpectrumRecord>,
    notes: Vec<String>,
}

fn jobs_for(params: &ModelParams, config: &NumericConfig) -> Vec<Job> {
    let mut jobs = vec![
        Job::Expansion,
        Job::Ladder,
        Job::BfDiscrepancy,
        Job::MomentumForm,
        Job::Adjoint,
        Job::PseudoGaussian,
        Job::MetricLimit,
        Job::Fuzz,
    ];
    if params.beta() > 0.0 {
        jobs.extend([Job::PseudoDeformed, Job::DeformedPosition]);
    }
    if params.is_hermitian_case() {
        jobs.push(Job::HermitianCase);
    }
    if config.numeric {
        jobs.extend([
            Job::NumericResidual,
            Job::ResidualConvergence,
            Job::Spectrum,
        ]);
        if params.beta() > 0.0 {
            jobs.push(Job::RealityConvergence);
        }
    }
    jobs
}

fn record(label: String, spectrum: &Spectrum, oracle: Option<Vec<f64>>) -> SpectrumRecord {
    SpectrumRecord {
        label,
        values: spectrum.values.clone(),
        oracle,
    }
}

fn failed_study(name: &str, e: VerifyError) -> CheckResult {
    CheckResult::failed(name, checks::anchors::CONVERGENCE, 0.0, e.to_string())
}

/// One random batch of the symbolic identities; the residual is the worst
/// over all draws.
pub fn identity_fuzz(seed: u64, count: usize, beta: f64) -> CheckResult {
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    let mut scan = |label: &str, c: CheckResult| {
        worst = worst.max(c.residual);
        if !c.passed {
            failures.push(format!("{label}: {} ({})", c.name, c.details));
        }
    };
    for (k, p) in draws::batch(seed, count, 0.0).iter().enumerate() {
        let label = format!("draw {k}");
        scan(&label, checks::check_expansion(p));
        scan(&label, checks::check_adjoint(p));
        scan(&label, checks::check_pseudo_symbolic(p, None));
        if beta > 0.0 {
            if let Ok(d) = p.with_beta(beta) {
                scan(&label, checks::check_pseudo_symbolic(&d, None));
            }
        }
    }
    for (k, p) in draws::batch_reduced(seed, count, 0.0).iter().enumerate() {
        scan(
            &format!("reduced draw {k}"),
            checks::check_bf_discrepancy(p),
        );
    }
    let details = if failures.is_empty() {
        format!("seed {seed}, {count} general and {count} reduced draws")
    } else {
        format!("seed {seed}; failures: {}", failures.join("; "))
    };
    CheckResult::new(
        "identity_fuzz",
        checks::anchors::FUZZ,
        worst,
        SYMBOLIC_TOL,
        details,
    )
}

fn run_job(job: Job, params: &ModelParams, config: &NumericConfig) -> JobOutput {
    let flat = params.undeformed();
    let one = |c: CheckResult| JobOutput {
        checks: vec![c],
        ..Default::default()
    };
    let grid = || checks::grid_for(params, config.n, config.p_max);
    match job {
        Job::Expansion => one(checks::check_expansion(&flat)),
        Job::Ladder => one(checks::check_ladder_commutator(&flat)),
        Job::BfDiscrepancy => {
            if params.is_reduced_regime() {
                one(checks::check_bf_discrepancy(params))
            } else {
                JobOutput {
                    notes: vec![
                        "bf_discrepancy skipped: parameters are outside m = hbar = 1, lambda = -delta"
                            .into(),
                    ],
                    ..Default::default()
                }
            }
        }
        Job::MomentumForm => one(checks::check_momentum_form(&flat)),
        Job::Adjoint => one(checks::check_adjoint(&flat)),
        Job::PseudoGaussian => {
            let exp = if params.beta() > 0.0 {
                None
            } else {
                config.exponent_override
            };
            one(checks::check_pseudo_symbolic(&flat, exp))
        }
        Job::PseudoDeformed => one(checks::check_pseudo_symbolic(
            params,
            config.exponent_override,
        )),
        Job::DeformedPosition => one(checks::check_deformed_position(params)),
        Job::HermitianCase => one(checks::check_hermitian_case(params)),
        Job::MetricLimit => one(checks::check_metric_limit(
            params,
            SUITE_LIMIT_BETA,
            SUITE_LIMIT_RANGE,
        )),
        Job::Fuzz => one(identity_fuzz(config.seed, config.draws, params.beta())),
        Job::NumericResidual => match grid() {
            Ok(g) => one(checks::check_numeric_residual(
                params,
                &g,
                config.fd_order,
                &config.probes,
                config.exponent_override,
            )),
            Err(e) => one(CheckResult::failed(
                "numeric_residual",
                checks::anchors::NUMERIC_RESIDUAL,
                0.0,
                e.to_string(),
            )),
        },
        Job::ResidualConvergence => {
            if params.is_hermitian_case() {
                return JobOutput {
                    notes: vec![
                        "residual_convergence skipped: lambda = delta, the residual is at rounding level"
                            .into(),
                    ],
                    ..Default::default()
                };
            }
            let grids = convergence::refinement_grids(config.n, config.p_max);
            match convergence::convergence_study(
                params,
                &grids,
                StudyTarget::Residual(config.probes.clone()),
                config.fd_order,
            ) {
                Ok(s) => one(s.result),
                Err(e) => one(failed_study("residual_convergence", e)),
            }
        }
        Job::Spectrum => match grid() {
            Ok(g) => {
                let s = checks::check_spectrum(params, &g, config.fd_order, config.levels);
                let mut out = one(s.result);
                if let Some(spectrum) = &s.spectrum {
                    let label = if params.beta() > 0.0 {
                        "general"
                    } else {
                        "hermitized"
                    };
                    out.spectra
                        .push(record(label.into(), spectrum, s.oracle.clone()));
                }
                if params.beta() == 0.0 {
                    out.notes.push(
                        "oracle levels (n+1/2)sqrt(omega^2-4 lambda delta) are derived by symbolic hermitization"
                            .into(),
                    );
                }
                out
            }
            Err(e) => one(CheckResult::failed(
                "spectrum",
                checks::anchors::SPECTRUM,
                checks::SPECTRUM_TOL,
                e.to_string(),
            )),
        },
        Job::RealityConvergence => {
            let grids = convergence::truncation_grids(config.n.div_ceil(2) | 1, config.p_max);
            let levels = config.levels.min(3);
            match convergence::convergence_study(
                params,
                &grids,
                StudyTarget::ImaginaryParts { levels },
                config.fd_order,
            ) {
                Ok(s) => JobOutput {
                    spectra: s
                        .spectra
                        .iter()
                        .zip(&s.points)
                        .map(|(sp, pt)| record(format!("general p_max={}", pt.p_max), sp, None))
                        .collect(),
                    checks: vec![s.result],
                    notes: Vec::new(),
                },
                Err(e) => one(failed_study("imaginary_parts_convergence", e)),
            }
        }
    }
}

pub fn run_suite(params: &ModelParams, config: &NumericConfig) -> Result<Report, VerifyError> {
    run_suite_with(Exec::default(), params, config)
}

/// Runs every applicable check. Configuration errors are returned before
/// any check runs; individual check failures are recorded in the report.
pub fn run_suite_with(
    exec: Exec,
    params: &ModelParams,
    config: &NumericConfig,
) -> Result<Report, VerifyError> {
    config.validate()?;
    // The metric must exist for the parameters; degenerate gaps were
    // already rejected by ModelParams.
    model::metric(params)?;
    let jobs = jobs_for(params, config);
    let outputs = par::map_slice(exec, &jobs, |job| {
        let start = Instant::now();
        let out = run_job(*job, params, config);
        (out, start.elapsed())
    });

    let mut checks = Vec::new();
    let mut spectra = Vec::new();
    let mut notes = Vec::new();
    let mut timings: Vec<(String, Duration)> = Vec::new();
    for (job, (out, elapsed)) in jobs.iter().zip(outputs) {
        checks.extend(out.checks);
        spectra.extend(out.spectra);
        notes.extend(out.notes);
        timings.push((format!("{job:?}"), elapsed));
    }
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    spectra.sort_by(|a, b| a.label.cmp(&b.label));

    let grid = if config.numeric {
        Some(checks::grid_for(params, config.n, config.p_max)?.summary())
    } else {
        None
    };
    Ok(Report {
        params: *params,
        grid,
        fd_order: config.fd_order,
        checks,
        spectra,
        seed: config.seed,
        notes,
        timings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1() -> ModelParams {
        ModelParams::new(1.0, -0.5, 0.5, 1.0, 1.0, 0.0).unwrap()
    }

    fn small() -> NumericConfig {
        NumericConfig {
            n: 401,
            draws: 10,
            ..Default::default()
        }
    }

    #[test]
    fn symbolic_only_suite() {
        let cfg = NumericConfig {
            numeric: false,
            draws: 5,
            ..Default::default()
        };
        let r = run_suite(&p1(), &cfg).unwrap();
        assert!(r.passed(), "{:?}", r.failing().collect::<Vec<_>>());
        assert!(r.grid.is_none());
        assert!(r.checks.len() >= 6);
        let names: Vec<_> = r.checks.iter().map(|c| c.name.clone()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
    }

    #[test]
    fn numeric_suite_passes_for_p1() {
        let r = run_suite(&p1(), &small()).unwrap();
        assert!(r.passed(), "{:?}", r.failing().collect::<Vec<_>>());
        assert!(r.check("numeric_residual").is_some());
        assert!(r.check("spectrum_oracle").is_some());
        assert_eq!(r.spectra.len(), 1);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let cfg = NumericConfig {
            n: 201,
            draws: 5,
            ..Default::default()
        };
        let a = run_suite_with(Exec::Sequential, &p1(), &cfg).unwrap();
        let b = run_suite(&p1(), &cfg).unwrap();
        assert_eq!(a.checks, b.checks);
        assert_eq!(a.spectra, b.spectra);
    }

    #[test]
    fn override_fails_pseudo_checks() {
        let cfg = NumericConfig {
            exponent_override: Some(0.3),
            ..small()
        };
        let r = run_suite(&p1(), &cfg).unwrap();
        assert!(!r.passed());
        let failing: Vec<_> = r.failing().map(|c| c.name.as_str()).collect();
        assert!(
            failing.contains(&"pseudo_hermiticity_gaussian"),
            "{failing:?}"
        );
        assert!(failing.contains(&"numeric_residual"), "{failing:?}");
    }

    #[test]
    fn invalid_config_is_rejected() {
        let bad = NumericConfig {
            n: 1000,
            ..Default::default()
        };
        assert!(run_suite(&p1(), &bad).is_err());
        let bad = NumericConfig {
            fd_order: 3,
            ..Default::default()
        };
        assert!(run_suite(&p1(), &bad).is_err());
    }
}
