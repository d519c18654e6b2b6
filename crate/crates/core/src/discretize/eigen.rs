//! Dense eigenvalues of grid operators.

use faer::{Mat, Side};
use num_complex::Complex64;
use serde::Serialize;

use super::matrix::{weighted_adjoint, MatrixOp};
use crate::error::DiscretizeError;

/// Relative tolerance on `A = A†_w` for the self-adjoint solver.
pub const SELF_ADJOINT_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EigenKind {
    /// Full complex spectrum of a non-symmetric matrix.
    General,
    /// Symmetrize with `W^{1/2} A W^{-1/2}` and use a Hermitian solver.
    SelfAdjointWeighted,
}

/// Lowest eigenvalues, sorted by real part then imaginary part.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    pub values: Vec<Complex64>,
    pub levels: usize,
}

impl Spectrum {
    pub fn from_unsorted(mut values: Vec<Complex64>, levels: usize) -> Self {
        values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        values.truncate(levels);
        Self {
            levels: values.len(),
            values,
        }
    }

    /// `|Im E| / |Re E|` per level.
    pub fn imaginary_ratios(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|e| e.im.abs() / e.re.abs())
            .collect()
    }
}

/// Largest `|A - A†_w|` entry; the self-adjointness defect.
pub fn self_adjoint_defect(a: &MatrixOp) -> f64 {
    let adj = weighted_adjoint(a);
    let n = a.n();
    let hw = a.half_bandwidth();
    (0..n)
        .flat_map(|i| (i.saturating_sub(hw)..(i + hw + 1).min(n)).map(move |j| (i, j)))
        .map(|(i, j)| (a.get(i, j) - adj.get(i, j)).norm())
        .fold(0.0, f64::max)
}

pub fn eigs(a: &MatrixOp, kind: EigenKind, levels: usize) -> Result<Spectrum, DiscretizeError> {
    let n = a.n();
    let real = a.is_real();
    let values: Vec<Complex64> = match kind {
        EigenKind::General => {
            if real {
                let m = Mat::<f64>::from_fn(n, n, |i, j| a.get(i, j).re);
                m.eigenvalues()
                    .map_err(|_| DiscretizeError::NoConvergence)?
            } else {
                a.as_mat()
                    .eigenvalues()
                    .map_err(|_| DiscretizeError::NoConvergence)?
            }
        }
        EigenKind::SelfAdjointWeighted => {
            let allowed = SELF_ADJOINT_TOL * a.norm_inf();
            let deviation = self_adjoint_defect(a);
            if deviation > allowed {
                return Err(DiscretizeError::NotSelfAdjoint { deviation, allowed });
            }
            let sqrt_w: Vec<f64> = a.grid().weights().iter().map(|w| w.sqrt()).collect();
            let entry = |i: usize, j: usize| a.get(i, j) * (sqrt_w[i] / sqrt_w[j]);
            let evs: Vec<f64> = if real {
                Mat::<f64>::from_fn(n, n, |i, j| entry(i, j).re)
                    .self_adjoint_eigenvalues(Side::Lower)
                    .map_err(|_| DiscretizeError::NoConvergence)?
            } else {
                Mat::<Complex64>::from_fn(n, n, entry)
                    .self_adjoint_eigenvalues(Side::Lower)
                    .map_err(|_| DiscretizeError::NoConvergence)?
            };
            evs.into_iter().map(|e| Complex64::new(e, 0.0)).collect()
        }
    };
    Ok(Spectrum::from_unsorted(values, levels))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::discretize::{assemble_matrix, Grid};
    use crate::model::{self, ModelParams};

    #[test]
    fn diagonal_spectrum() {
        let g = Arc::new(Grid::new(5, 1.0, 0, 0.0).unwrap());
        let vals = [3.0, 1.0, 2.0, 5.0, 4.0];
        let a = MatrixOp::diagonal(g, |i, _| Complex64::new(vals[i], 0.0));
        for kind in [EigenKind::General, EigenKind::SelfAdjointWeighted] {
            let s = eigs(&a, kind, 3).unwrap();
            for (v, expected) in s.values.iter().zip([1.0, 2.0, 3.0]) {
                assert!((v - Complex64::new(expected, 0.0)).norm() < 1e-12);
            }
            assert_eq!(s.levels, 3);
        }
    }

    #[test]
    fn sort_breaks_ties_by_imaginary_part() {
        let s = Spectrum::from_unsorted(
            vec![
                Complex64::new(1.0, 0.5),
                Complex64::new(1.0, -0.5),
                Complex64::new(0.0, 2.0),
            ],
            3,
        );
        assert_eq!(s.values[0], Complex64::new(0.0, 2.0));
        assert_eq!(s.values[1], Complex64::new(1.0, -0.5));
    }

    #[test]
    fn rejects_non_self_adjoint_input() {
        let params = ModelParams::new(1.0, -0.5, 0.5, 1.0, 1.0, 0.0).unwrap();
        let (_, h0) = model::h0_momentum(&params).unwrap();
        let g = Arc::new(Grid::new(101, 8.0, 0, 0.0).unwrap());
        let a = assemble_matrix(&h0, &g, 4).unwrap();
        assert!(matches!(
            eigs(&a, EigenKind::SelfAdjointWeighted, 3),
            Err(DiscretizeError::NotSelfAdjoint { .. })
        ));
    }

    #[test]
    fn oscillator_ground_state_energy() {
        let params = ModelParams::new(1.0, 0.0, 0.0, 1.0, 1.0, 0.0).unwrap();
        let h = model::h_quadratic(&params).unwrap();
        let g = Arc::new(Grid::new(1001, 8.0, 0, 0.0).unwrap());
        let a = assemble_matrix(&h, &g, 4).unwrap();
        let s = eigs(&a, EigenKind::SelfAdjointWeighted, 4).unwrap();
        for (k, e) in s.values.iter().enumerate() {
            assert!((e.re - (k as f64 + 0.5)).abs() < 1e-6, "level {k}: {e}");
        }
    }
}
