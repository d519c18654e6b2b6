use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("deformation parameters differ: {left} vs {right}")]
    BetaMismatch { left: f64, right: f64 },
    #[error("unsupported measure power {0} (expected 0 or -1)")]
    UnsupportedMeasure(i32),
    #[error("measure power -1 requires beta > 0")]
    DeformedMeasureWithoutBeta,
    #[error("{0} is only defined for beta = 0")]
    RequiresUndeformed(&'static str),
    #[error("{0} is only defined for beta > 0")]
    RequiresDeformed(&'static str),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("{name} must be finite, got {value}")]
    NotFinite { name: &'static str, value: f64 },
    #[error("omega must be positive, got {0}")]
    NonPositiveOmega(f64),
    #[error("mass must be positive, got {0}")]
    NonPositiveMass(f64),
    #[error("hbar must be positive, got {0}")]
    NonPositiveHbar(f64),
    #[error("beta must be non-negative, got {0}")]
    NegativeBeta(f64),
    #[error("omega - lambda - delta = {0} is too close to zero; the metric exponent is undefined")]
    DegenerateMetric(f64),
    #[error("parameters are outside the reduced regime m = hbar = 1, lambda = -delta")]
    NotReducedRegime,
    #[error("metric family {family} is incompatible with beta = {beta}")]
    MetricFamily { family: &'static str, beta: f64 },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiscretizeError {
    #[error("grid size must be odd and at least 5, got {0}")]
    GridSize(usize),
    #[error("p_max must be positive and finite, got {0}")]
    GridExtent(f64),
    #[error("unsupported measure power {0} (expected 0 or -1)")]
    MeasurePower(i32),
    #[error("beta must be non-negative, got {0}")]
    NegativeBeta(f64),
    #[error("derivative order {0} is not supported (expected 1 or 2)")]
    DerivativeOrder(usize),
    #[error("finite-difference accuracy {0} is not supported (expected 2 or 4)")]
    FdOrder(usize),
    #[error("stencil half-width {half_width} does not fit a grid of {n} points")]
    StencilTooWide { half_width: usize, n: usize },
    #[error("operator beta {op} does not match grid beta {grid}")]
    BetaMismatch { op: f64, grid: f64 },
    #[error("matrices live on different grids")]
    GridMismatch,
    #[error("metric log-entry {max_log} exceeds the overflow guard; use the log/ratio pathway")]
    MetricOverflow { max_log: f64 },
    #[error("non-finite entry at ({row}, {col}) after similarity transform")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not self-adjoint in the weighted inner product (deviation {deviation:e}, allowed {allowed:e})")]
    NotSelfAdjoint { deviation: f64, allowed: f64 },
    #[error("eigen-decomposition did not converge")]
    NoConvergence,
    #[error("gaussian width must be positive, got {0}")]
    ProbeWidth(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Discretize(#[from] DiscretizeError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("{0}")]
    Precondition(String),
}
