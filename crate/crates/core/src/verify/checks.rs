//! Individual identity checks. Symbolic checks compare canonical operator
//! forms; numeric checks work on a momentum grid.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::report::CheckResult;
use crate::algebra::{DiffOp, Measure, DEFAULT_TOL};
use crate::discretize::{
    assemble_matrix, eigs, gaussian_state, similarity_transform, weighted_adjoint, weighted_norm,
    EigenKind, Grid, Spectrum,
};
use crate::error::VerifyError;
use crate::model::{self, MetricFamily, MetricSpec, ModelParams};

pub const SYMBOLIC_TOL: f64 = DEFAULT_TOL;
/// Absolute tolerance on hermitized eigenvalues against the closed form.
pub const SPECTRUM_TOL: f64 = 1e-4;
/// Largest accepted `|Im E| / |Re E|` for the deformed spectrum.
pub const REALITY_TOL: f64 = 1e-6;
/// Probe residual target at grid spacing [`RESIDUAL_REF_SPACING`].
pub const RESIDUAL_TARGET: f64 = 1e-6;
pub const RESIDUAL_REF_SPACING: f64 = 0.01;
/// Relative self-adjointness defect allowed for the Hermitian case.
pub const HERMITIAN_NUMERIC_TOL: f64 = 1e-12;

pub mod anchors {
    pub const EXPANSION: &str = "ωa†a + λa² + δa†² + ω/2 = (1/2mħω)[(ω+λ+δ)p̂² + imω(δ−λ−ω)p̂x̂ + imω(δ−λ+ω)x̂p̂ + m²ω²(ω−λ−δ)x̂²] + ω/2";
    pub const LADDER: &str = "[a, a†] = 1";
    pub const BF_DISCREPANCY: &str =
        "p̂²/2 + ω²x̂²/2 + i(μ/2){x̂,p̂} + i(ω/2)[x̂,p̂] + ω/2 ≠ p̂²/2 + ω²x̂²/2 + iμ{x̂,p̂}";
    pub const MOMENTUM_FORM: &str = "H₀ = Q∂²/∂p² + Rp∂/∂p + Sp² + T";
    pub const ADJOINT: &str = "H₀† = Q∂²/∂p² − Rp∂/∂p + Sp² − T";
    pub const PSEUDO_GAUSSIAN: &str = "η₀H₀η₀⁻¹ = H₀†, η₀ = exp[(δ−λ)p²/(mħω(ω−λ−δ))]";
    pub const PSEUDO_POWER: &str = "ηHη⁻¹ = H† on dp/(1+βp²), η = (1+βp²)^((δ−λ)/(mħω(ω−λ−δ)β))";
    pub const DEFORMED_POSITION: &str = "x̂ = iħ(1+βp²)∂/∂p is symmetric on dp/(1+βp²)";
    pub const METRIC_LIMIT: &str = "η₀ = lim_{β→0} (1+βp²)^e(β)";
    pub const NUMERIC_RESIDUAL: &str = "ηHη⁻¹ = H† on the momentum grid";
    pub const SPECTRUM: &str = "real spectrum E_n = (n+½)√(ω²−4λδ) of the hermitized H₀";
    pub const REALITY: &str = "real spectrum of the deformed H";
    pub const HERMITIAN: &str = "λ = δ: H₀ = H₀†, identity metric";
    pub const FUZZ: &str = "seeded random draws of the symbolic identities";
    pub const CONVERGENCE: &str = "observed order of the discretization error";
}

fn symbolic(name: &str, anchor: &str, outcome: Result<(f64, String), VerifyError>) -> CheckResult {
    match outcome {
        Ok((residual, details)) => CheckResult::new(name, anchor, residual, SYMBOLIC_TOL, details),
        Err(e) => CheckResult::failed(name, anchor, SYMBOLIC_TOL, e.to_string()),
    }
}

fn require_undeformed(params: &ModelParams) -> Result<(), VerifyError> {
    if params.beta() == 0.0 {
        Ok(())
    } else {
        Err(VerifyError::Precondition(format!(
            "check requires beta = 0, got {}",
            params.beta()
        )))
    }
}

/// Ladder-operator Hamiltonian against the printed quadratic form.
pub fn check_expansion(params: &ModelParams) -> CheckResult {
    symbolic(
        "expansion",
        anchors::EXPANSION,
        (|| {
            require_undeformed(params)?;
            let cmp =
                model::h_ladder(params)?.compare(&model::h_quadratic(params)?, SYMBOLIC_TOL)?;
            Ok((cmp.residual, format!("difference: {}", cmp.difference)))
        })(),
    )
}

pub fn check_ladder_commutator(params: &ModelParams) -> CheckResult {
    symbolic(
        "ladder_commutator",
        anchors::LADDER,
        (|| {
            let (a, adag) = model::ladder_ops(params)?;
            let cmp = a
                .commutator(&adag)?
                .compare(&DiffOp::identity(0.0), SYMBOLIC_TOL)?;
            Ok((cmp.residual, format!("a = {a}")))
        })(),
    )
}

/// The reduced Hamiltonian equals the quadratic form but differs from the
/// `iμ{x̂,p̂}` form by exactly `μ p D + μ/2`. Evaluated at `β = 0`.
pub fn check_bf_discrepancy(params: &ModelParams) -> CheckResult {
    symbolic(
        "bf_discrepancy",
        anchors::BF_DISCREPANCY,
        (|| {
            let params = params.undeformed();
            let reduced = model::h_eq5(&params)?;
            let from_quadratic = reduced.compare(&model::h_quadratic(&params)?, SYMBOLIC_TOL)?;
            let difference = reduced.sub(&model::h_bf(&params)?)?;
            let mu = params.mu();
            let expected = DiffOp::term(
                crate::algebra::CoeffFn::from_poly(
                    crate::algebra::Poly::monomial(Complex64::new(mu, 0.0), 1),
                    0.0,
                ),
                1,
            )
            .add(&DiffOp::scalar(Complex64::new(mu / 2.0, 0.0), 0.0))?;
            let shape = difference.compare(&expected, SYMBOLIC_TOL)?;
            let verdict = if difference.is_zero() {
                "operators identical (mu = 0)".to_string()
            } else {
                format!("discrepancy confirmed (mu = {mu})")
            };
            Ok((
                from_quadratic.residual.max(shape.residual),
                format!(
                    "{verdict}; h_eq5 - h_bf = {difference}; residual vs quadratic form {:e}",
                    from_quadratic.residual
                ),
            ))
        })(),
    )
}

/// `Q D² + R p D + S p² + T` against the quadratic form.
pub fn check_momentum_form(params: &ModelParams) -> CheckResult {
    symbolic(
        "momentum_form",
        anchors::MOMENTUM_FORM,
        (|| {
            let (c, h0) = model::h0_momentum(params)?;
            let cmp = h0.compare(&model::h_quadratic(params)?, SYMBOLIC_TOL)?;
            let t_vs_r = (c.t - c.r / 2.0).abs();
            Ok((
                cmp.residual.max(t_vs_r),
                format!("Q = {}, R = {}, S = {}, T = {}", c.q, c.r, c.s, c.t),
            ))
        })(),
    )
}

pub fn check_adjoint(params: &ModelParams) -> CheckResult {
    symbolic(
        "adjoint",
        anchors::ADJOINT,
        (|| {
            let (_, h0) = model::h0_momentum(params)?;
            let adj = h0.adjoint(Measure::Standard)?;
            let cmp = adj.compare(&model::h0_adjoint_expected(params)?, SYMBOLIC_TOL)?;
            Ok((cmp.residual, format!("H0† = {adj}")))
        })(),
    )
}

/// `λ = δ`: identity metric and a self-adjoint `H₀`.
pub fn check_hermitian_case(params: &ModelParams) -> CheckResult {
    symbolic(
        "hermitian_case",
        anchors::HERMITIAN,
        (|| {
            if !params.is_hermitian_case() {
                return Err(VerifyError::Precondition("requires lambda = delta".into()));
            }
            let params = params.undeformed();
            let spec = model::gaussian_alpha(&params)?;
            let (_, h0) = model::h0_momentum(&params)?;
            let cmp = h0.compare(&h0.adjoint(Measure::Standard)?, SYMBOLIC_TOL)?;
            Ok((
                cmp.residual.max(spec.exponent.abs()),
                format!(
                    "metric family {}, exponent {}",
                    spec.family.name(),
                    spec.exponent
                ),
            ))
        })(),
    )
}

/// The metric the parameters select, optionally with its exponent replaced.
pub fn resolve_metric(
    params: &ModelParams,
    exponent_override: Option<f64>,
) -> Result<MetricSpec, VerifyError> {
    let spec = model::metric(params)?;
    Ok(match exponent_override {
        Some(e) => spec.with_exponent(e),
        None => spec,
    })
}

/// `η H η⁻¹ = H†`, symbolically: Gaussian metric and plain measure at
/// `β = 0`; power-law metric and the deformed measure for `β > 0`.
pub fn check_pseudo_symbolic(params: &ModelParams, exponent_override: Option<f64>) -> CheckResult {
    let (name, anchor) = if params.beta() > 0.0 {
        ("pseudo_hermiticity_deformed", anchors::PSEUDO_POWER)
    } else {
        ("pseudo_hermiticity_gaussian", anchors::PSEUDO_GAUSSIAN)
    };
    symbolic(
        name,
        anchor,
        (|| {
            let spec = resolve_metric(params, exponent_override)?;
            let h = model::hamiltonian(params)?;
            let lhs = spec.conjugate(&h)?;
            let rhs = h.adjoint(spec.measure())?;
            let cmp = lhs.compare(&rhs, SYMBOLIC_TOL)?;
            Ok((
                cmp.residual,
                format!(
                    "metric {} exponent {}; difference: {}",
                    spec.family.name(),
                    spec.exponent,
                    cmp.difference
                ),
            ))
        })(),
    )
}

pub fn check_deformed_position(params: &ModelParams) -> CheckResult {
    symbolic(
        "deformed_position_symmetric",
        anchors::DEFORMED_POSITION,
        (|| {
            let x = model::position(params);
            let cmp = x.adjoint(Measure::Deformed)?.compare(&x, SYMBOLIC_TOL)?;
            Ok((cmp.residual, format!("x = {x}")))
        })(),
    )
}

/// Maximum relative deviation of `(1+βp²)^e(β)` from `exp(αp²)` over
/// `|p| <= p_range`, evaluated in log space. Tolerance is three times the
/// leading-order estimate `|α| β p_range⁴ / 2`.
pub fn check_metric_limit(params: &ModelParams, beta_small: f64, p_range: f64) -> CheckResult {
    let name = "metric_limit";
    let anchor = anchors::METRIC_LIMIT;
    let outcome = (|| {
        if beta_small.is_nan() || beta_small <= 0.0 {
            return Err(VerifyError::Precondition(
                "beta_small must be positive".into(),
            ));
        }
        let power = model::metric_exponent(&params.with_beta(beta_small)?)?;
        let gauss = model::gaussian_alpha(&params.undeformed())?;
        const SAMPLES: usize = 2001;
        let deviation = (0..SAMPLES)
            .map(|k| -p_range + 2.0 * p_range * k as f64 / (SAMPLES - 1) as f64)
            .map(|p| (power.log_value(p) - gauss.log_value(p)).exp_m1().abs())
            .fold(0.0, f64::max);
        let estimate = gauss.exponent.abs() * beta_small * p_range.powi(4) / 2.0;
        Ok((deviation, estimate))
    })();
    match outcome {
        Ok((deviation, estimate)) => CheckResult::new(
            name,
            anchor,
            deviation,
            3.0 * estimate,
            format!("beta = {beta_small:e}, |p| <= {p_range}, leading-order estimate {estimate:e}"),
        ),
        Err(e) => CheckResult::failed(name, anchor, 0.0, e.to_string()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProbeSpec {
    pub center: f64,
    pub width: f64,
}

/// Gaussian probes whose ±3σ support lies inside `|p| <= 3`: centers
/// `-2..=2` with width `(3 - |c|)/3`.
pub fn default_probes() -> Vec<ProbeSpec> {
    [-2.0, -1.0, 0.0, 1.0, 2.0]
        .into_iter()
        .map(|center: f64| ProbeSpec {
            center,
            width: (3.0 - center.abs()) / 3.0,
        })
        .collect()
}

/// Grid with the measure matching the deformation.
pub fn grid_for(params: &ModelParams, n: usize, p_max: f64) -> Result<Arc<Grid>, VerifyError> {
    let kappa = if params.beta() > 0.0 { -1 } else { 0 };
    Ok(Arc::new(Grid::new(n, p_max, kappa, params.beta())?))
}

/// Per-probe relative residuals `‖(ηAη⁻¹ - A†_w)ψ‖_w / ‖Aψ‖_w`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeResiduals {
    pub per_probe: Vec<f64>,
    /// Largest absolute row sum of `ηAη⁻¹ - A†_w` over rows with
    /// `|p_i| <= p_max/2`, relative to `‖A‖_∞`.
    pub interior_rows: f64,
}

impl ProbeResiduals {
    pub fn max(&self) -> f64 {
        self.per_probe.iter().copied().fold(0.0, f64::max)
    }
}

pub fn probe_residuals(
    params: &ModelParams,
    grid: &Arc<Grid>,
    fd_order: usize,
    probes: &[ProbeSpec],
    metric: &MetricSpec,
) -> Result<ProbeResiduals, VerifyError> {
    let h = model::hamiltonian(params)?;
    let a = assemble_matrix(&h, grid, fd_order)?;
    let transformed = similarity_transform(&a, metric, false)?;
    let adjoint = weighted_adjoint(&a);
    let per_probe = probes
        .iter()
        .map(|probe| {
            let psi = gaussian_state(grid, probe.center, probe.width)?;
            let lhs = transformed.apply(&psi);
            let rhs = adjoint.apply(&psi);
            let diff: Vec<Complex64> = lhs.iter().zip(&rhs).map(|(x, y)| x - y).collect();
            Ok(weighted_norm(grid, &diff) / weighted_norm(grid, &a.apply(&psi)))
        })
        .collect::<Result<Vec<f64>, VerifyError>>()?;
    let defect = transformed.sub(&adjoint)?;
    let interior_rows = grid
        .interior(grid.p_max() / 2.0)
        .map(|i| defect.row_abs_sum(i))
        .fold(0.0, f64::max)
        / a.norm_inf();
    Ok(ProbeResiduals {
        per_probe,
        interior_rows,
    })
}

/// Residual target scaled from the reference spacing at the given order.
pub fn residual_target(grid: &Grid, fd_order: usize) -> f64 {
    RESIDUAL_TARGET * (grid.spacing() / RESIDUAL_REF_SPACING).powi(fd_order as i32)
}

pub fn check_numeric_residual(
    params: &ModelParams,
    grid: &Arc<Grid>,
    fd_order: usize,
    probes: &[ProbeSpec],
    exponent_override: Option<f64>,
) -> CheckResult {
    let name = "numeric_residual";
    let anchor = anchors::NUMERIC_RESIDUAL;
    let tolerance =
        if params.is_hermitian_case() && params.beta() == 0.0 && exponent_override.is_none() {
            HERMITIAN_NUMERIC_TOL
        } else {
            residual_target(grid, fd_order)
        };
    let outcome = resolve_metric(params, exponent_override)
        .and_then(|metric| probe_residuals(params, grid, fd_order, probes, &metric));
    match outcome {
        Ok(r) => CheckResult::new(
            name,
            anchor,
            r.max(),
            tolerance,
            format!(
                "n = {}, p_max = {}, fd_order = {fd_order}; per-probe {:?}; interior-row defect {:e}; boundary: Dirichlet truncation",
                grid.n(),
                grid.p_max(),
                r.per_probe,
                r.interior_rows
            ),
        ),
        Err(e) => CheckResult::failed(name, anchor, tolerance, e.to_string()),
    }
}

/// Relative self-adjointness defect of the assembled `H₀` on rows with
/// `|p_i| <= p_max/2`.
pub fn interior_self_adjoint_defect(
    params: &ModelParams,
    grid: &Arc<Grid>,
    fd_order: usize,
) -> Result<f64, VerifyError> {
    let a = assemble_matrix(&model::hamiltonian(params)?, grid, fd_order)?;
    let defect = a.sub(&weighted_adjoint(&a))?;
    Ok(grid
        .interior(grid.p_max() / 2.0)
        .map(|i| defect.row_abs_sum(i))
        .fold(0.0, f64::max)
        / a.norm_inf())
}

#[derive(Clone, Debug, PartialEq)]
pub enum SpectrumOutcome {
    /// Hermitized spectrum compared level by level with the closed form.
    Compared,
    /// `ω < λ + δ`: the spectrum is bounded above instead of below; the top
    /// levels were compared with `-(n+½)√(ω²-4λδ)`.
    Inverted,
    /// `ω² <= 4λδ`: no discrete real spectrum to compare against.
    BrokenReality { discriminant: f64 },
    /// `β > 0`: general spectrum, reality measured by `|Im E|/|Re E|`.
    Deformed,
}

#[derive(Clone, Debug)]
pub struct SpectrumCheck {
    pub result: CheckResult,
    pub outcome: SpectrumOutcome,
    pub spectrum: Option<Spectrum>,
    pub oracle: Option<Vec<f64>>,
}

/// Closed-form levels `(n+½)√(ω²-4λδ)`.
pub fn oracle_levels(params: &ModelParams, levels: usize) -> Option<Vec<f64>> {
    let disc = params.discriminant();
    (disc > 0.0).then(|| {
        (0..levels)
            .map(|n| (n as f64 + 0.5) * disc.sqrt())
            .collect()
    })
}

/// `η^{1/2} H₀ η^{-1/2}` built symbolically; with the Gaussian metric this
/// is `Q D² + (S - R²/4Q) p²`, self-adjoint on the plain measure.
pub fn hermitized_h0(params: &ModelParams) -> Result<DiffOp, VerifyError> {
    let (_, h0) = model::h0_momentum(params)?;
    let spec = model::gaussian_alpha(params)?;
    Ok(match spec.family {
        MetricFamily::Gaussian => h0.conjugate_gaussian(spec.exponent / 2.0)?,
        _ => h0,
    })
}

pub fn check_spectrum(
    params: &ModelParams,
    grid: &Arc<Grid>,
    fd_order: usize,
    levels: usize,
) -> SpectrumCheck {
    if params.beta() > 0.0 {
        return deformed_spectrum(params, grid, fd_order, levels);
    }
    let name = "spectrum_oracle";
    let anchor = anchors::SPECTRUM;
    let disc = params.discriminant();
    if disc <= 0.0 {
        return SpectrumCheck {
            result: CheckResult::failed(
                name,
                anchor,
                SPECTRUM_TOL,
                format!(
                    "omega^2 - 4 lambda delta = {disc} <= 0: reality of the spectrum is broken"
                ),
            ),
            outcome: SpectrumOutcome::BrokenReality { discriminant: disc },
            spectrum: None,
            oracle: None,
        };
    }
    let inverted = params.gap() < 0.0;
    let sign = if inverted { -1.0 } else { 1.0 };
    let outcome = (|| {
        let h = hermitized_h0(params)?.scale(Complex64::new(sign, 0.0));
        let a = assemble_matrix(&h, grid, fd_order)?;
        let mut s = eigs(&a, EigenKind::SelfAdjointWeighted, levels)?;
        for v in &mut s.values {
            *v *= sign;
        }
        Ok::<_, VerifyError>(s)
    })();
    match outcome {
        Ok(spectrum) => {
            let oracle: Vec<f64> = oracle_levels(params, spectrum.levels)
                .unwrap_or_default()
                .into_iter()
                .map(|e| sign * e)
                .collect();
            let residual = spectrum
                .values
                .iter()
                .zip(&oracle)
                .map(|(e, o)| (e - Complex64::new(*o, 0.0)).norm())
                .fold(0.0, f64::max);
            SpectrumCheck {
                result: CheckResult::new(
                    name,
                    anchor,
                    residual,
                    SPECTRUM_TOL,
                    format!(
                        "lowest {} levels{}; oracle is derived from the hermitized operator",
                        spectrum.levels,
                        if inverted {
                            " of -H (spectrum bounded above)"
                        } else {
                            ""
                        }
                    ),
                ),
                outcome: if inverted {
                    SpectrumOutcome::Inverted
                } else {
                    SpectrumOutcome::Compared
                },
                spectrum: Some(spectrum),
                oracle: Some(oracle),
            }
        }
        Err(e) => SpectrumCheck {
            result: CheckResult::failed(name, anchor, SPECTRUM_TOL, e.to_string()),
            outcome: SpectrumOutcome::Compared,
            spectrum: None,
            oracle: None,
        },
    }
}

fn deformed_spectrum(
    params: &ModelParams,
    grid: &Arc<Grid>,
    fd_order: usize,
    levels: usize,
) -> SpectrumCheck {
    let name = "spectrum_reality";
    let anchor = anchors::REALITY;
    let outcome = (|| {
        let a = assemble_matrix(&model::h_deformed(params)?, grid, fd_order)?;
        Ok::<_, VerifyError>(eigs(&a, EigenKind::General, levels)?)
    })();
    match outcome {
        Ok(spectrum) => {
            let ratios = spectrum.imaginary_ratios();
            let worst = ratios.iter().copied().fold(0.0, f64::max);
            SpectrumCheck {
                result: CheckResult::new(
                    name,
                    anchor,
                    worst,
                    REALITY_TOL,
                    format!("|Im E|/|Re E| per level: {ratios:?}; boundary: Dirichlet truncation"),
                ),
                outcome: SpectrumOutcome::Deformed,
                spectrum: Some(spectrum),
                oracle: None,
            }
        }
        Err(e) => SpectrumCheck {
            result: CheckResult::failed(name, anchor, REALITY_TOL, e.to_string()),
            outcome: SpectrumOutcome::Deformed,
            spectrum: None,
            oracle: None,
        },
    }
}
