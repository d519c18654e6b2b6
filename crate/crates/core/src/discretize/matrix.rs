//! Dense matrix images of differential operators and the weighted-inner-product
//! operations on them.

use std::sync::Arc;

use faer::Mat;
use num_complex::Complex64;

use super::banded::Banded;
use super::grid::Grid;
use crate::algebra::DiffOp;
use crate::error::DiscretizeError;
use crate::model::MetricSpec;
use crate::par::{self, Exec};

/// Largest metric log-entry that may be exponentiated directly.
pub const METRIC_LOG_LIMIT: f64 = 700.0;

/// Dense complex matrix tied to the grid it was built on.
///
/// `half_bandwidth` bounds the non-zero band: entries with `|i - j|` larger
/// than it are exactly zero.
#[derive(Clone, Debug)]
pub struct MatrixOp {
    mat: Mat<Complex64>,
    grid: Arc<Grid>,
    half_bandwidth: usize,
}

impl MatrixOp {
    pub fn from_fn(
        grid: Arc<Grid>,
        half_bandwidth: usize,
        f: impl FnMut(usize, usize) -> Complex64,
    ) -> Self {
        let n = grid.n();
        Self {
            mat: Mat::from_fn(n, n, f),
            grid,
            half_bandwidth: half_bandwidth.min(n - 1),
        }
    }

    pub fn identity(grid: Arc<Grid>) -> Self {
        Self::diagonal(grid, |_, _| Complex64::new(1.0, 0.0))
    }

    /// `diag(f(i, p_i))`
    pub fn diagonal(grid: Arc<Grid>, f: impl Fn(usize, f64) -> Complex64) -> Self {
        let diag: Vec<Complex64> = grid
            .points()
            .iter()
            .enumerate()
            .map(|(i, &p)| f(i, p))
            .collect();
        Self::from_fn(grid, 0, |i, j| {
            if i == j {
                diag[i]
            } else {
                Complex64::default()
            }
        })
    }

    pub fn n(&self) -> usize {
        self.mat.nrows()
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn half_bandwidth(&self) -> usize {
        self.half_bandwidth
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.mat[(i, j)]
    }

    pub fn as_mat(&self) -> &Mat<Complex64> {
        &self.mat
    }

    fn band(&self, i: usize) -> std::ops::Range<usize> {
        i.saturating_sub(self.half_bandwidth)..(i + self.half_bandwidth + 1).min(self.n())
    }

    pub fn is_real(&self) -> bool {
        (0..self.n()).all(|i| self.band(i).all(|j| self.mat[(i, j)].im == 0.0))
    }

    fn same_grid(&self, other: &MatrixOp) -> Result<(), DiscretizeError> {
        if Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid {
            Ok(())
        } else {
            Err(DiscretizeError::GridMismatch)
        }
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.apply_with(Exec::default(), v)
    }

    pub fn apply_with(&self, exec: Exec, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.n(), "vector length must match the grid");
        par::map_range(exec, self.n(), |i| {
            self.band(i)
                .map(|j| self.mat[(i, j)] * v[j])
                .fold(Complex64::default(), |acc, x| acc + x)
        })
    }

    pub fn matmul(&self, rhs: &MatrixOp) -> Result<MatrixOp, DiscretizeError> {
        self.same_grid(rhs)?;
        Ok(MatrixOp {
            mat: &self.mat * &rhs.mat,
            grid: self.grid.clone(),
            half_bandwidth: (self.half_bandwidth + rhs.half_bandwidth).min(self.n() - 1),
        })
    }

    pub fn sub(&self, rhs: &MatrixOp) -> Result<MatrixOp, DiscretizeError> {
        self.same_grid(rhs)?;
        Ok(MatrixOp {
            mat: &self.mat - &rhs.mat,
            grid: self.grid.clone(),
            half_bandwidth: self.half_bandwidth.max(rhs.half_bandwidth),
        })
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n())
            .map(|i| self.row_abs_sum(i))
            .fold(0.0, f64::max)
    }

    pub fn row_abs_sum(&self, i: usize) -> f64 {
        self.band(i).map(|j| self.mat[(i, j)].norm()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        (0..self.n())
            .flat_map(|i| self.band(i).map(move |j| (i, j)))
            .map(|(i, j)| self.mat[(i, j)].norm())
            .fold(0.0, f64::max)
    }
}

fn first_derivative_stencil(fd_order: usize, h: f64) -> Vec<f64> {
    match fd_order {
        2 => vec![-0.5 / h, 0.0, 0.5 / h],
        _ => vec![
            1.0 / (12.0 * h),
            -2.0 / (3.0 * h),
            0.0,
            2.0 / (3.0 * h),
            -1.0 / (12.0 * h),
        ],
    }
}

fn second_derivative_stencil(fd_order: usize, h: f64) -> Vec<f64> {
    let h2 = h * h;
    match fd_order {
        2 => vec![1.0 / h2, -2.0 / h2, 1.0 / h2],
        _ => vec![
            -1.0 / (12.0 * h2),
            4.0 / (3.0 * h2),
            -5.0 / (2.0 * h2),
            4.0 / (3.0 * h2),
            -1.0 / (12.0 * h2),
        ],
    }
}

fn check_fd_order(grid: &Grid, fd_order: usize) -> Result<(), DiscretizeError> {
    if fd_order != 2 && fd_order != 4 {
        return Err(DiscretizeError::FdOrder(fd_order));
    }
    let half_width = fd_order / 2;
    if grid.n() < 2 * half_width + 1 {
        return Err(DiscretizeError::StencilTooWide {
            half_width,
            n: grid.n(),
        });
    }
    Ok(())
}

/// `d^b/dp^b` with Dirichlet truncation: the dedicated second-derivative
/// stencil for even powers, one first-derivative factor for odd ones.
fn derivative_power(grid: &Grid, order: usize, fd_order: usize) -> Banded {
    let n = grid.n();
    let h = grid.spacing();
    let d1 = Banded::from_stencil(n, &first_derivative_stencil(fd_order, h));
    let d2 = Banded::from_stencil(n, &second_derivative_stencil(fd_order, h));
    let mut out = if order % 2 == 1 {
        d1
    } else {
        Banded::identity(n)
    };
    for _ in 0..order / 2 {
        out = d2.matmul(&out);
    }
    out
}

fn banded_to_matrix(grid: Arc<Grid>, b: &Banded) -> MatrixOp {
    MatrixOp::from_fn(grid, b.half_width(), |i, j| {
        Complex64::new(b.get(i, j), 0.0)
    })
}

/// Central finite-difference matrix for `d/dp` (`order` 1) or `d²/dp²` (`order` 2).
pub fn derivative_matrix(
    grid: &Arc<Grid>,
    order: usize,
    fd_order: usize,
) -> Result<MatrixOp, DiscretizeError> {
    if order != 1 && order != 2 {
        return Err(DiscretizeError::DerivativeOrder(order));
    }
    check_fd_order(grid, fd_order)?;
    Ok(banded_to_matrix(
        grid.clone(),
        &derivative_power(grid, order, fd_order),
    ))
}

pub fn assemble_matrix(
    op: &DiffOp,
    grid: &Arc<Grid>,
    fd_order: usize,
) -> Result<MatrixOp, DiscretizeError> {
    assemble_matrix_with(Exec::default(), op, grid, fd_order)
}

/// `Σ_b diag(f_b(p_i)) · D_b`, with the coefficient functions evaluated exactly.
pub fn assemble_matrix_with(
    exec: Exec,
    op: &DiffOp,
    grid: &Arc<Grid>,
    fd_order: usize,
) -> Result<MatrixOp, DiscretizeError> {
    if op.beta() != grid.beta() {
        return Err(DiscretizeError::BetaMismatch {
            op: op.beta(),
            grid: grid.beta(),
        });
    }
    check_fd_order(grid, fd_order)?;
    let n = grid.n();
    let powers: Vec<(usize, Banded)> = op
        .terms()
        .map(|(b, _)| (b, derivative_power(grid, b, fd_order)))
        .collect();
    let half_bandwidth = powers
        .iter()
        .map(|(_, d)| d.half_width())
        .max()
        .unwrap_or(0);
    let width = 2 * half_bandwidth + 1;

    let rows: Vec<Vec<Complex64>> = par::map_range(exec, n, |i| {
        let mut row = vec![Complex64::default(); width];
        let coeffs = op.coefficients_at(grid.points()[i]);
        for ((_, c), (_, d)) in coeffs.iter().zip(&powers) {
            for j in d.columns(i) {
                row[j + half_bandwidth - i] += c * d.get(i, j);
            }
        }
        row
    });

    Ok(MatrixOp::from_fn(grid.clone(), half_bandwidth, |i, j| {
        if i.abs_diff(j) > half_bandwidth {
            Complex64::default()
        } else {
            rows[i][j + half_bandwidth - i]
        }
    }))
}

/// `W⁻¹ A^H W` with `W = diag(w_i)`.
pub fn weighted_adjoint(a: &MatrixOp) -> MatrixOp {
    let w = a.grid.weights();
    MatrixOp::from_fn(a.grid.clone(), a.half_bandwidth, |i, j| {
        a.mat[(j, i)].conj() * (w[j] / w[i])
    })
}

/// `log η(p_i)` on the grid.
pub fn metric_log_diagonal(spec: &MetricSpec, grid: &Grid) -> Vec<f64> {
    grid.points().iter().map(|&p| spec.log_value(p)).collect()
}

fn check_metric_grid(spec: &MetricSpec, grid: &Grid) -> Result<(), DiscretizeError> {
    if spec.beta != grid.beta() {
        return Err(DiscretizeError::BetaMismatch {
            op: spec.beta,
            grid: grid.beta(),
        });
    }
    Ok(())
}

/// `diag(η(p_i))`, or `diag(η(p_i)^{1/2})` when `half`.
pub fn metric_diagonal(
    spec: &MetricSpec,
    grid: &Arc<Grid>,
    half: bool,
) -> Result<MatrixOp, DiscretizeError> {
    check_metric_grid(spec, grid)?;
    let scale = if half { 0.5 } else { 1.0 };
    let logs = metric_log_diagonal(spec, grid);
    let max_log = logs.iter().map(|l| (l * scale).abs()).fold(0.0, f64::max);
    if max_log > METRIC_LOG_LIMIT {
        return Err(DiscretizeError::MetricOverflow { max_log });
    }
    Ok(MatrixOp::diagonal(grid.clone(), |i, _| {
        Complex64::new((logs[i] * scale).exp(), 0.0)
    }))
}

pub fn similarity_transform(
    a: &MatrixOp,
    spec: &MetricSpec,
    half: bool,
) -> Result<MatrixOp, DiscretizeError> {
    similarity_transform_with(Exec::default(), a, spec, half)
}

/// `η A η⁻¹` (or `η^{1/2} A η^{-1/2}` when `half`) entry by entry as
/// `A_ij exp(s (L_i - L_j))`. Zero entries stay zero, so banded operators
/// never see the overflow of `η` itself.
pub fn similarity_transform_with(
    exec: Exec,
    a: &MatrixOp,
    spec: &MetricSpec,
    half: bool,
) -> Result<MatrixOp, DiscretizeError> {
    check_metric_grid(spec, &a.grid)?;
    let scale = if half { 0.5 } else { 1.0 };
    let logs = metric_log_diagonal(spec, &a.grid);
    let hw = a.half_bandwidth;
    let rows: Vec<Vec<Complex64>> = par::map_range(exec, a.n(), |i| {
        a.band(i)
            .map(|j| {
                let v = a.mat[(i, j)];
                if v == Complex64::default() {
                    v
                } else {
                    v * (scale * (logs[i] - logs[j])).exp()
                }
            })
            .collect()
    });
    for (i, row) in rows.iter().enumerate() {
        if let Some(k) = row
            .iter()
            .position(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(DiscretizeError::NonFinite {
                row: i,
                col: i.saturating_sub(hw) + k,
            });
        }
    }
    Ok(MatrixOp::from_fn(a.grid.clone(), hw, |i, j| {
        if i.abs_diff(j) > hw {
            Complex64::default()
        } else {
            rows[i][j - i.saturating_sub(hw)]
        }
    }))
}

/// `Σ w_i conj(a_i) b_i`
pub fn weighted_inner(grid: &Grid, a: &[Complex64], b: &[Complex64]) -> Complex64 {
    grid.weights()
        .iter()
        .zip(a.iter().zip(b))
        .map(|(&w, (x, y))| x.conj() * y * w)
        .fold(Complex64::default(), |acc, v| acc + v)
}

pub fn weighted_norm(grid: &Grid, a: &[Complex64]) -> f64 {
    grid.weights()
        .iter()
        .zip(a)
        .map(|(&w, x)| w * x.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Samples of `exp(-(p-center)²/(2 width²))`, normalized in the grid's
/// weighted inner product.
pub fn gaussian_state(
    grid: &Grid,
    center: f64,
    width: f64,
) -> Result<Vec<Complex64>, DiscretizeError> {
    if width.is_nan() || width <= 0.0 {
        return Err(DiscretizeError::ProbeWidth(width));
    }
    let raw: Vec<Complex64> = grid
        .points()
        .iter()
        .map(|&p| {
            let z = (p - center) / width;
            Complex64::new((-0.5 * z * z).exp(), 0.0)
        })
        .collect();
    let norm = weighted_norm(grid, &raw);
    Ok(raw.into_iter().map(|v| v / norm).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{CoeffFn, Poly};
    use crate::model::{self, ModelParams};

    fn grid(n: usize, p_max: f64, kappa: i32, beta: f64) -> Arc<Grid> {
        Arc::new(Grid::new(n, p_max, kappa, beta).unwrap())
    }

    fn samples(g: &Grid, f: impl Fn(f64) -> f64) -> Vec<Complex64> {
        g.points()
            .iter()
            .map(|&p| Complex64::new(f(p), 0.0))
            .collect()
    }

    #[test]
    fn first_derivative_is_antisymmetric_inside() {
        let g = grid(21, 2.0, 0, 0.0);
        for fd in [2, 4] {
            let d = derivative_matrix(&g, 1, fd).unwrap();
            for i in 2..19 {
                for j in 0..21 {
                    assert_eq!(d.get(i, j), -d.get(j, i));
                }
                let row_sum: Complex64 = (0..21).map(|j| d.get(i, j)).sum();
                assert!(row_sum.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn derivative_of_square_is_linear() {
        let g = grid(201, 5.0, 0, 0.0);
        let d = derivative_matrix(&g, 1, 2).unwrap();
        let out = d.apply(&samples(&g, |p| p * p));
        for (o, p) in out.iter().zip(g.points()).take(200).skip(1) {
            assert!((o.re - 2.0 * p).abs() < 1e-10);
        }
    }

    #[test]
    fn canonical_commutator_on_interior() {
        // (D P - P D) f = f with error O(h^fd) on smooth f.
        let mut errs = vec![];
        for n in [201, 401] {
            let g = grid(n, 4.0, 0, 0.0);
            let d = derivative_matrix(&g, 1, 4).unwrap();
            let p = MatrixOp::diagonal(g.clone(), |_, x| Complex64::new(x, 0.0));
            let comm = d.matmul(&p).unwrap().sub(&p.matmul(&d).unwrap()).unwrap();
            let f = samples(&g, |x| (-x * x / 2.0).exp());
            let out = comm.apply(&f);
            let err = g
                .interior(2.0)
                .map(|i| (out[i] - f[i]).norm())
                .fold(0.0, f64::max);
            errs.push(err);
        }
        assert!(errs[1] < 1e-5);
        assert!((errs[0] / errs[1]).log2() > 3.5, "{errs:?}");
    }

    #[test]
    fn stencil_validation() {
        let g = grid(5, 1.0, 0, 0.0);
        assert_eq!(
            derivative_matrix(&g, 3, 2).unwrap_err(),
            DiscretizeError::DerivativeOrder(3)
        );
        assert_eq!(
            derivative_matrix(&g, 1, 6).unwrap_err(),
            DiscretizeError::FdOrder(6)
        );
        assert!(derivative_matrix(&g, 2, 4).is_ok());
    }

    #[test]
    fn identity_and_multiplication_assemble_to_diagonals() {
        let g = grid(11, 3.0, 0, 0.0);
        let id = assemble_matrix(&DiffOp::identity(0.0), &g, 4).unwrap();
        let p2 = DiffOp::multiplication(CoeffFn::from_poly(Poly::from_real(&[0.0, 0.0, 1.0]), 0.0));
        let m = assemble_matrix(&p2, &g, 4).unwrap();
        for i in 0..11 {
            for j in 0..11 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert_eq!(id.get(i, j).re, expected);
                let expected = if i == j { g.points()[i].powi(2) } else { 0.0 };
                assert_eq!(m.get(i, j).re, expected);
            }
        }
        assert!(assemble_matrix(&DiffOp::identity(0.1), &g, 4).is_err());
    }

    #[test]
    fn oscillator_ground_state_is_an_eigenvector() {
        let params = ModelParams::new(1.0, 0.0, 0.0, 1.0, 1.0, 0.0).unwrap();
        let h = model::h_quadratic(&params).unwrap();
        let mut errs = vec![];
        for n in [401, 801] {
            let g = grid(n, 8.0, 0, 0.0);
            let a = assemble_matrix(&h, &g, 4).unwrap();
            let f = samples(&g, |p| (-p * p / 2.0).exp());
            let out = a.apply(&f);
            let err = g
                .interior(6.0)
                .map(|i| (out[i] - f[i] * 0.5).norm())
                .fold(0.0, f64::max);
            errs.push(err);
        }
        assert!(errs[1] < 1e-5);
        assert!((errs[0] / errs[1]).log2() > 3.5, "{errs:?}");
    }

    #[test]
    fn weighted_adjoint_basics() {
        let g = grid(9, 2.0, -1, 0.5);
        let diag = MatrixOp::diagonal(g.clone(), |_, p| Complex64::new(1.0 + p, 0.0));
        let adj = weighted_adjoint(&diag);
        for i in 0..9 {
            assert_eq!(adj.get(i, i), diag.get(i, i));
        }
        let g0 = grid(9, 2.0, 0, 0.0);
        let d = derivative_matrix(&g0, 1, 4).unwrap();
        let adj = weighted_adjoint(&d);
        for i in 0..9 {
            for j in 0..9 {
                assert_eq!(adj.get(i, j), d.get(j, i).conj());
            }
        }
    }

    #[test]
    fn metric_diagonals() {
        let params = ModelParams::new(1.0, -0.5, 0.5, 1.0, 1.0, 0.1).unwrap();
        let spec = model::metric_exponent(&params).unwrap();
        let g = grid(5, 2.0, -1, 0.1);
        let eta = metric_diagonal(&spec, &g, false).unwrap();
        // p = 1 sits at index 3
        assert!((eta.get(3, 3).re - 1.1f64.powi(10)).abs() < 1e-12);
        assert!((eta.get(3, 3).re - 2.5937424601).abs() < 1e-9);
        let half = metric_diagonal(&spec, &g, true).unwrap();
        assert!((half.get(3, 3).re - 1.1f64.powi(5)).abs() < 1e-12);

        let gauss = model::gaussian_alpha(&params.undeformed()).unwrap();
        let g0 = grid(5, 2.0, 0, 0.0);
        let eta0 = metric_diagonal(&gauss, &g0, false).unwrap();
        assert!((eta0.get(4, 4).re - 4f64.exp()).abs() < 1e-12);

        let id = metric_diagonal(&MetricSpec::identity(0.0), &g0, false).unwrap();
        for i in 0..5 {
            assert_eq!(id.get(i, i).re, 1.0);
        }

        let big = grid(5, 30.0, 0, 0.0);
        assert!(matches!(
            metric_diagonal(&gauss, &big, false),
            Err(DiscretizeError::MetricOverflow { .. })
        ));
        assert!(metric_diagonal(&spec, &g0, false).is_err());
    }

    #[test]
    fn similarity_leaves_diagonals_and_identity_metric_alone() {
        let g = grid(41, 30.0, 0, 0.0);
        let gauss = MetricSpec::gaussian(1.0);
        let diag = MatrixOp::diagonal(g.clone(), |_, p| Complex64::new(p, 1.0));
        let t = similarity_transform(&diag, &gauss, false).unwrap();
        for i in 0..41 {
            assert_eq!(t.get(i, i), diag.get(i, i));
        }
        let d = derivative_matrix(&g, 2, 4).unwrap();
        let t = similarity_transform(&d, &MetricSpec::identity(0.0), false).unwrap();
        for i in 0..41 {
            for j in 0..41 {
                assert_eq!(t.get(i, j), d.get(i, j));
            }
        }
    }

    #[test]
    fn similarity_reports_non_finite_entries() {
        let g = grid(11, 10.0, 0, 0.0);
        let d = derivative_matrix(&g, 1, 2).unwrap();
        let err = similarity_transform(&d, &MetricSpec::gaussian(30.0), false).unwrap_err();
        assert!(matches!(err, DiscretizeError::NonFinite { .. }));
    }

    #[test]
    fn gaussian_probe_states() {
        let g = grid(801, 10.0, 0, 0.0);
        let psi = gaussian_state(&g, 0.0, 1.0).unwrap();
        assert!((weighted_norm(&g, &psi) - 1.0).abs() < 1e-12);

        let a = gaussian_state(&g, -4.0, 0.5).unwrap();
        let b = gaussian_state(&g, 4.0, 0.5).unwrap();
        assert!(weighted_inner(&g, &a, &b).norm() < 1e-8);

        let shifted = gaussian_state(&g, 1.5, 1.0).unwrap();
        let p = assemble_matrix(&DiffOp::momentum(0.0), &g, 4).unwrap();
        let mean = weighted_inner(&g, &shifted, &p.apply(&shifted));
        assert!((mean.re - 1.5).abs() < 1e-10);

        assert!(gaussian_state(&g, 0.0, 0.0).is_err());

        let gd = grid(801, 10.0, -1, 0.2);
        let psi = gaussian_state(&gd, 1.0, 1.0).unwrap();
        assert!((weighted_norm(&gd, &psi) - 1.0).abs() < 1e-12);
    }
}
