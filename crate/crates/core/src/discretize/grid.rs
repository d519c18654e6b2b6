use serde::Serialize;

use crate::error::DiscretizeError;

/// Uniform momentum grid `p_i = -p_max + i h` with quadrature weights
/// `w_i = h (1 + βp_i²)^κ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    n: usize,
    p_max: f64,
    spacing: f64,
    measure_power: i32,
    beta: f64,
    points: Vec<f64>,
    weights: Vec<f64>,
}

/// The part of a grid that goes into reports.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSummary {
    pub n: usize,
    pub p_max: f64,
    pub spacing: f64,
    pub measure_power: i32,
    pub beta: f64,
}

impl Grid {
    pub fn new(
        n: usize,
        p_max: f64,
        measure_power: i32,
        beta: f64,
    ) -> Result<Self, DiscretizeError> {
        if n < 5 || n.is_multiple_of(2) {
            return Err(DiscretizeError::GridSize(n));
        }
        if !(p_max > 0.0 && p_max.is_finite()) {
            return Err(DiscretizeError::GridExtent(p_max));
        }
        if measure_power != 0 && measure_power != -1 {
            return Err(DiscretizeError::MeasurePower(measure_power));
        }
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(DiscretizeError::NegativeBeta(beta));
        }
        let spacing = 2.0 * p_max / (n - 1) as f64;
        let mid = (n - 1) / 2;
        // Mirror the two halves so the grid is exactly symmetric and p = 0 is exact.
        let points: Vec<f64> = (0..n)
            .map(|i| {
                if i < mid {
                    -p_max + i as f64 * spacing
                } else if i == mid {
                    0.0
                } else {
                    p_max - (n - 1 - i) as f64 * spacing
                }
            })
            .collect();
        let weights = points
            .iter()
            .map(|&p| spacing * (1.0 + beta * p * p).powi(measure_power))
            .collect();
        Ok(Self {
            n,
            p_max,
            spacing,
            measure_power,
            beta,
            points,
            weights,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn p_max(&self) -> f64 {
        self.p_max
    }
    pub fn spacing(&self) -> f64 {
        self.spacing
    }
    pub fn measure_power(&self) -> i32 {
        self.measure_power
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn points(&self) -> &[f64] {
        &self.points
    }
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn summary(&self) -> GridSummary {
        GridSummary {
            n: self.n,
            p_max: self.p_max,
            spacing: self.spacing,
            measure_power: self.measure_power,
            beta: self.beta,
        }
    }

    /// Indices with `|p_i| <= limit`.
    pub fn interior(&self, limit: f64) -> impl Iterator<Item = usize> + '_ {
        self.points
            .iter()
            .enumerate()
            .filter(move |(_, p)| p.abs() <= limit)
            .map(|(i, _)| i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_point_grid() {
        let g = Grid::new(5, 2.0, 0, 0.0).unwrap();
        assert_eq!(g.points(), &[-2.0, -1.0, 0.0, 1.0, 2.0]);
        assert!(g.weights().iter().all(|&w| w == 1.0));
    }

    #[test]
    fn deformed_weights() {
        let g = Grid::new(5, 2.0, -1, 1.0).unwrap();
        assert_eq!(g.weights()[4], 0.2);
        assert_eq!(g.weights()[2], 1.0);
        assert!(g.weights().iter().all(|&w| w > 0.0));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(Grid::new(4, 2.0, 0, 0.0), Err(DiscretizeError::GridSize(4)));
        assert_eq!(Grid::new(3, 2.0, 0, 0.0), Err(DiscretizeError::GridSize(3)));
        assert_eq!(
            Grid::new(5, 0.0, 0, 0.0),
            Err(DiscretizeError::GridExtent(0.0))
        );
        assert_eq!(
            Grid::new(5, 1.0, 1, 0.0),
            Err(DiscretizeError::MeasurePower(1))
        );
    }

    #[test]
    fn symmetric_about_zero() {
        let g = Grid::new(1001, 10.0, 0, 0.0).unwrap();
        let pts = g.points();
        assert_eq!(pts[500], 0.0);
        for i in 0..1001 {
            assert_eq!(pts[i], -pts[1000 - i]);
        }
    }
}
