//! Grid-refinement studies that turn fixed numeric targets into measured
//! convergence orders.

use serde::Serialize;

use super::checks::{self, anchors, ProbeSpec};
use super::report::CheckResult;
use crate::discretize::Spectrum;
use crate::error::VerifyError;
use crate::model::ModelParams;

#[derive(Clone, Debug, PartialEq)]
pub enum StudyTarget {
    /// Largest probe residual of `ηHη⁻¹ - H†`.
    Residual(Vec<ProbeSpec>),
    /// `|E₀ - E₀^oracle|` of the hermitized operator (`β = 0`).
    GroundEnergy,
    /// `|Im E|/|Re E|` of the lowest levels of the deformed operator; the
    /// study passes when every level is non-increasing along the grids.
    ImaginaryParts { levels: usize },
}

impl StudyTarget {
    fn label(&self) -> &'static str {
        match self {
            StudyTarget::Residual(_) => "residual",
            StudyTarget::GroundEnergy => "ground_energy",
            StudyTarget::ImaginaryParts { .. } => "imaginary_parts",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub n: usize,
    pub p_max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StudyPoint {
    pub n: usize,
    pub p_max: f64,
    pub spacing: f64,
    /// One value per level for `ImaginaryParts`, a single error otherwise.
    pub values: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct ConvergenceStudy {
    pub result: CheckResult,
    pub points: Vec<StudyPoint>,
    /// Observed orders between consecutive grids (empty for imaginary parts).
    pub orders: Vec<f64>,
    pub spectra: Vec<Spectrum>,
}

/// `log(e₁/e₂) / log(h₁/h₂)` for consecutive refinements.
pub fn observed_orders(points: &[StudyPoint]) -> Vec<f64> {
    points
        .windows(2)
        .map(|w| (w[0].values[0] / w[1].values[0]).ln() / (w[0].spacing / w[1].spacing).ln())
        .collect()
}

/// Largest increase of any level between consecutive points; zero for a
/// non-increasing sequence.
pub fn largest_increase(points: &[StudyPoint]) -> f64 {
    points
        .windows(2)
        .flat_map(|w| w[0].values.iter().zip(&w[1].values).map(|(a, b)| b - a))
        .fold(0.0, f64::max)
}

fn measure(
    params: &ModelParams,
    spec: GridSpec,
    target: &StudyTarget,
    fd_order: usize,
) -> Result<(StudyPoint, Option<Spectrum>), VerifyError> {
    let grid = checks::grid_for(params, spec.n, spec.p_max)?;
    let (values, spectrum) = match target {
        StudyTarget::Residual(probes) => {
            let metric = checks::resolve_metric(params, None)?;
            let r = checks::probe_residuals(params, &grid, fd_order, probes, &metric)?;
            (vec![r.max()], None)
        }
        StudyTarget::GroundEnergy => {
            if params.beta() > 0.0 {
                return Err(VerifyError::Precondition(
                    "ground-energy study requires beta = 0".into(),
                ));
            }
            let s = checks::check_spectrum(params, &grid, fd_order, 1);
            let (Some(spectrum), Some(oracle)) = (s.spectrum, s.oracle) else {
                return Err(VerifyError::Precondition(s.result.details));
            };
            (
                vec![(spectrum.values[0].re - oracle[0]).abs()],
                Some(spectrum),
            )
        }
        StudyTarget::ImaginaryParts { levels } => {
            if params.beta() <= 0.0 {
                return Err(VerifyError::Precondition(
                    "imaginary-part study requires beta > 0".into(),
                ));
            }
            let s = checks::check_spectrum(params, &grid, fd_order, *levels);
            let Some(spectrum) = s.spectrum else {
                return Err(VerifyError::Precondition(s.result.details));
            };
            (spectrum.imaginary_ratios(), Some(spectrum))
        }
    };
    Ok((
        StudyPoint {
            n: spec.n,
            p_max: spec.p_max,
            spacing: grid.spacing(),
            values,
        },
        spectrum,
    ))
}

/// Runs `target` on each grid in order. Residual and ground-energy studies
/// pass when every observed order is at least `fd_order - 1`; the reported
/// residual is the shortfall. Imaginary-part studies pass when no level
/// increases; the residual is the largest increase.
pub fn convergence_study(
    params: &ModelParams,
    grids: &[GridSpec],
    target: StudyTarget,
    fd_order: usize,
) -> Result<ConvergenceStudy, VerifyError> {
    if grids.len() < 3 {
        return Err(VerifyError::Precondition(format!(
            "a convergence study needs at least 3 grids, got {}",
            grids.len()
        )));
    }
    let name = format!("{}_convergence", target.label());
    let mut points = Vec::with_capacity(grids.len());
    let mut spectra = Vec::new();
    for &g in grids {
        let (point, spectrum) = measure(params, g, &target, fd_order)?;
        points.push(point);
        spectra.extend(spectrum);
    }
    let series: Vec<String> = points
        .iter()
        .map(|p| format!("n={} p_max={} -> {:?}", p.n, p.p_max, p.values))
        .collect();

    let (result, orders) = match target {
        StudyTarget::ImaginaryParts { .. } => {
            let increase = largest_increase(&points);
            let details = format!(
                "{}; {}",
                series.join(", "),
                if increase > 0.0 {
                    "non-monotone sequence"
                } else {
                    "non-increasing"
                }
            );
            (
                CheckResult::new(name, anchors::CONVERGENCE, increase, 0.0, details),
                Vec::new(),
            )
        }
        _ => {
            let orders = observed_orders(&points);
            let required = fd_order as f64 - 1.0;
            let worst = orders.iter().copied().fold(f64::INFINITY, f64::min);
            let shortfall = if worst.is_nan() {
                f64::MAX
            } else {
                (required - worst).max(0.0)
            };
            let details = format!(
                "{}; observed orders {orders:?}, required >= {required}",
                series.join(", ")
            );
            (
                CheckResult::new(name, anchors::CONVERGENCE, shortfall, 0.0, details),
                orders,
            )
        }
    };
    Ok(ConvergenceStudy {
        result,
        points,
        orders,
        spectra,
    })
}

/// Grids at `n/4`, `n/2` and `n` (rounded to odd) on a fixed `p_max`.
pub fn refinement_grids(n: usize, p_max: f64) -> Vec<GridSpec> {
    let odd = |k: usize| if k.is_multiple_of(2) { k + 1 } else { k };
    vec![
        GridSpec {
            n: odd(n / 4),
            p_max,
        },
        GridSpec {
            n: odd(n / 2),
            p_max,
        },
        GridSpec { n, p_max },
    ]
}

/// Grids at `k·p_max` for `k = 1, 2, 3` with the spacing held fixed.
pub fn truncation_grids(n: usize, p_max: f64) -> Vec<GridSpec> {
    (1..=3)
        .map(|k| GridSpec {
            n: k * (n - 1) + 1,
            p_max: k as f64 * p_max,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretize::{derivative_matrix, Grid};
    use num_complex::Complex64;
    use std::sync::Arc;

    fn p1() -> ModelParams {
        ModelParams::new(1.0, -0.5, 0.5, 1.0, 1.0, 0.0).unwrap()
    }

    fn point(spacing: f64, v: f64) -> StudyPoint {
        StudyPoint {
            n: 0,
            p_max: 0.0,
            spacing,
            values: vec![v],
        }
    }

    #[test]
    fn orders_from_synthetic_series() {
        let pts = [point(0.04, 16.0), point(0.02, 1.0), point(0.01, 1.0 / 16.0)];
        for o in observed_orders(&pts) {
            assert!((o - 4.0).abs() < 1e-12);
        }
        assert_eq!(largest_increase(&pts), 0.0);
        let bumpy = [point(1.0, 1.0), point(1.0, 0.5), point(1.0, 0.7)];
        assert!((largest_increase(&bumpy) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn needs_three_grids() {
        let g = refinement_grids(101, 8.0);
        assert!(convergence_study(&p1(), &g[..2], StudyTarget::GroundEnergy, 4).is_err());
        assert_eq!(g.iter().map(|s| s.n).collect::<Vec<_>>(), vec![25, 51, 101]);
        assert_eq!(
            truncation_grids(401, 20.0)
                .iter()
                .map(|s| s.n)
                .collect::<Vec<_>>(),
            vec![401, 801, 1201]
        );
    }

    #[test]
    fn constant_function_is_annihilated_at_every_n() {
        for n in [51, 101, 201] {
            let grid = Arc::new(Grid::new(n, 5.0, 0, 0.0).unwrap());
            let d = derivative_matrix(&grid, 1, 4).unwrap();
            let ones = vec![Complex64::new(1.0, 0.0); n];
            let out = d.apply(&ones);
            let w = d.half_bandwidth();
            let scale = d.norm_inf();
            assert!(out[w..n - w].iter().all(|z| z.norm() <= 1e-12 * scale));
        }
    }

    #[test]
    fn ground_energy_converges_at_fourth_order() {
        let grids = [
            GridSpec {
                n: 101,
                p_max: 10.0,
            },
            GridSpec {
                n: 201,
                p_max: 10.0,
            },
            GridSpec {
                n: 401,
                p_max: 10.0,
            },
        ];
        let s = convergence_study(&p1(), &grids, StudyTarget::GroundEnergy, 4).unwrap();
        assert!(s.result.passed, "{}", s.result.details);
        assert!(s.orders.iter().all(|o| *o > 3.5), "{:?}", s.orders);
    }

    #[test]
    fn residual_converges() {
        let s = convergence_study(
            &p1(),
            &refinement_grids(401, 10.0),
            StudyTarget::Residual(checks::default_probes()),
            4,
        )
        .unwrap();
        assert!(s.result.passed, "{}", s.result.details);
    }

    #[test]
    fn wrong_beta_is_rejected() {
        let g = refinement_grids(101, 8.0);
        assert!(
            convergence_study(&p1(), &g, StudyTarget::ImaginaryParts { levels: 3 }, 4).is_err()
        );
        let d = p1().with_beta(0.1).unwrap();
        assert!(convergence_study(&d, &g, StudyTarget::GroundEnergy, 4).is_err());
    }
}
