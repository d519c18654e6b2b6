use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use chrono::{SecondsFormat, Utc};
use pseudoherm_core::discretize::{GridSummary, Spectrum};
use pseudoherm_core::par::{self, Exec};
use pseudoherm_core::verify::checks::{self, SpectrumOutcome};
use pseudoherm_core::verify::suite::SUITE_LIMIT_RANGE;
use pseudoherm_core::verify::{check_metric_limit, run_suite, CheckResult, Report, SpectrumRecord};
use pseudoherm_core::{model, ModelParams};
use serde::Serialize;

use crate::config::JobConfig;
use crate::CliError;

#[derive(Serialize)]
struct ReportDocument<'a> {
    params: &'a ModelParams,
    grid: &'a Option<GridSummary>,
    fd_order: usize,
    checks: &'a [CheckResult],
    spectra: &'a [SpectrumRecord],
    notes: &'a [String],
    generated_at: &'a str,
    seed: u64,
}

impl<'a> ReportDocument<'a> {
    fn new(report: &'a Report, generated_at: &'a str) -> Self {
        Self {
            params: &report.params,
            grid: &report.grid,
            fd_order: report.fd_order,
            checks: &report.checks,
            spectra: &report.spectra,
            notes: &report.notes,
            generated_at,
            seed: report.seed,
        }
    }
}

fn timestamp() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(format!("cannot write stdout: {e}")))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Io(format!("cannot serialize report: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn summarize(report: &Report) {
    for c in &report.checks {
        eprintln!(
            "[{}] {:<32} residual {:.3e} (tol {:.1e})",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.residual,
            c.tolerance
        );
    }
}

fn suite(config: &JobConfig, params: &ModelParams) -> Result<Report, CliError> {
    run_suite(params, &config.numeric).map_err(|e| CliError::Usage(e.to_string()))
}

/// Exit 0 iff every check passes.
pub fn verify(config: &JobConfig) -> Result<bool, CliError> {
    let report = suite(config, &config.params)?;
    summarize(&report);
    let stamp = timestamp();
    emit(
        config.out.as_deref(),
        &to_json(&ReportDocument::new(&report, &stamp))?,
    )?;
    Ok(report.passed())
}

fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn spectrum_csv(spectrum: &Spectrum, oracle: Option<&[f64]>) -> String {
    let mut csv = String::from("n,re,im,oracle,abs_err\n");
    for (n, e) in spectrum.values.iter().enumerate() {
        let (o, err) = match oracle.and_then(|o| o.get(n)) {
            Some(&o) => (fmt_num(o), fmt_num((e - o).norm())),
            None => (String::new(), String::new()),
        };
        let _ = writeln!(csv, "{n},{},{},{o},{err}", fmt_num(e.re), fmt_num(e.im));
    }
    csv
}

/// Writes the lowest levels as CSV. Fails (exit 1) when no spectrum could be
/// computed.
pub fn spectrum(config: &JobConfig) -> Result<bool, CliError> {
    let params = &config.params;
    let grid = checks::grid_for(params, config.numeric.n, config.numeric.p_max)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let s = checks::check_spectrum(
        params,
        &grid,
        config.numeric.fd_order,
        config.numeric.levels,
    );
    let Some(spectrum) = &s.spectrum else {
        eprintln!("no spectrum: {}", s.result.details);
        return Ok(false);
    };
    if let SpectrumOutcome::Inverted = s.outcome {
        eprintln!("note: omega < lambda + delta, levels are the top of a spectrum bounded above");
    }
    eprintln!(
        "{}: max deviation {:.3e} (tol {:.1e})",
        s.result.name, s.result.residual, s.result.tolerance
    );
    emit(
        config.out.as_deref(),
        &spectrum_csv(spectrum, s.oracle.as_deref()),
    )?;
    Ok(true)
}

#[derive(Serialize)]
struct SweepRow {
    beta: f64,
    metric_family: &'static str,
    metric_exponent: f64,
    /// Relative deviation of the deformed metric from its undeformed limit
    /// over `|p| <= 5`; zero at `beta = 0`.
    metric_limit_deviation: f64,
    numeric_residual: Option<f64>,
    passed: bool,
}

#[derive(Serialize)]
struct SweepDocument<'a> {
    generated_at: String,
    seed: u64,
    beta_grid: &'a [f64],
    summary: Vec<SweepRow>,
    reports: Vec<ReportDocument<'a>>,
}

fn sweep_row(base: &ModelParams, beta: f64, report: &Report) -> Result<SweepRow, CliError> {
    let params = base
        .with_beta(beta)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let metric = model::metric(&params).map_err(|e| CliError::Usage(e.to_string()))?;
    let deviation = if beta > 0.0 {
        check_metric_limit(&params, beta, SUITE_LIMIT_RANGE).residual
    } else {
        0.0
    };
    Ok(SweepRow {
        beta,
        metric_family: metric.family.name(),
        metric_exponent: metric.exponent,
        metric_limit_deviation: deviation,
        numeric_residual: report.check("numeric_residual").map(|c| c.residual),
        passed: report.passed(),
    })
}

/// One suite per deformation value, merged in the order given.
pub fn sweep(config: &JobConfig) -> Result<bool, CliError> {
    let grid = config.beta_grid.as_deref().unwrap_or_default();
    if grid.len() < 2 {
        return Err(CliError::Usage(format!(
            "--beta-grid needs at least 2 values, got {}",
            grid.len()
        )));
    }
    if let Some(b) = grid.iter().find(|b| !(b.is_finite() && **b >= 0.0)) {
        return Err(CliError::Usage(format!(
            "beta values must be >= 0, got {b}"
        )));
    }
    let params: Vec<ModelParams> = grid
        .iter()
        .map(|&b| config.params.with_beta(b))
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let reports = par::map_slice(Exec::default(), &params, |p| suite(config, p))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let summary = grid
        .iter()
        .zip(&reports)
        .map(|(&b, r)| sweep_row(&config.params, b, r))
        .collect::<Result<Vec<_>, _>>()?;
    for row in &summary {
        eprintln!(
            "[{}] beta {:<10e} {:<8} metric-limit deviation {:.3e}",
            if row.passed { "PASS" } else { "FAIL" },
            row.beta,
            row.metric_family,
            row.metric_limit_deviation
        );
    }
    let passed = reports.iter().all(Report::passed);
    let stamp = timestamp();
    let doc = SweepDocument {
        generated_at: stamp.clone(),
        seed: config.numeric.seed,
        beta_grid: grid,
        summary,
        reports: reports
            .iter()
            .map(|r| ReportDocument::new(r, &stamp))
            .collect(),
    };
    emit(config.out.as_deref(), &to_json(&doc)?)?;
    Ok(passed)
}
