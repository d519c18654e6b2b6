use std::time::Duration;

use num_complex::Complex64;
use serde::Serialize;

use crate::discretize::GridSummary;
use crate::model::ModelParams;

/// One named identity with its measured residual.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    /// The formula the check establishes.
    pub paper_anchor: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub details: String,
}

impl CheckResult {
    /// `passed` is derived as `residual <= tolerance`; a non-finite residual
    /// is clamped to `f64::MAX` so reports stay valid JSON.
    pub fn new(
        name: impl Into<String>,
        anchor: impl Into<String>,
        residual: f64,
        tolerance: f64,
        details: impl Into<String>,
    ) -> Self {
        let residual = if residual.is_finite() {
            residual.abs()
        } else {
            f64::MAX
        };
        Self {
            name: name.into(),
            paper_anchor: anchor.into(),
            residual,
            tolerance,
            passed: residual <= tolerance,
            details: details.into(),
        }
    }

    /// A check that could not be evaluated.
    pub fn failed(
        name: impl Into<String>,
        anchor: impl Into<String>,
        tolerance: f64,
        details: impl Into<String>,
    ) -> Self {
        Self::new(name, anchor, f64::MAX, tolerance, details)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumRecord {
    pub label: String,
    pub values: Vec<Complex64>,
    pub oracle: Option<Vec<f64>>,
}

/// Outcome of a suite run. Everything except `timings` is a deterministic
/// function of the inputs.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub params: ModelParams,
    pub grid: Option<GridSummary>,
    pub fd_order: usize,
    pub checks: Vec<CheckResult>,
    pub spectra: Vec<SpectrumRecord>,
    pub seed: u64,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub timings: Vec<(String, Duration)>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failing(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}
