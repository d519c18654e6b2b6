//! Job configuration: a flat JSON file overlaid by command-line flags.

use std::path::{Path, PathBuf};

use clap::Args;
use pseudoherm_core::verify::{NumericConfig, ProbeSpec};
use pseudoherm_core::ModelParams;
use serde::Deserialize;

use crate::CliError;

/// Flags shared by every subcommand. All are optional here so that a config
/// file can supply them; defaults are applied after merging.
#[derive(Args, Debug, Clone, Default)]
pub struct JobArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub m: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Grid points (odd).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub pmax: Option<f64>,
    /// Finite-difference accuracy, 2 or 4.
    #[arg(long)]
    pub fd_order: Option<usize>,
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file (default stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Flat JSON object with the same keys as the flags (dashes as underscores).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Replace the metric exponent; debug negative control.
    #[arg(long, allow_hyphen_values = true)]
    pub exponent_override: Option<f64>,
    /// Comma-separated deformation values for `sweep`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub beta_grid: Option<Vec<f64>>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    omega: Option<f64>,
    lambda: Option<f64>,
    delta: Option<f64>,
    m: Option<f64>,
    hbar: Option<f64>,
    beta: Option<f64>,
    n: Option<usize>,
    #[serde(alias = "p_max")]
    pmax: Option<f64>,
    fd_order: Option<usize>,
    levels: Option<usize>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    exponent_override: Option<f64>,
    beta_grid: Option<Vec<f64>>,
    probes: Option<Vec<FileProbe>>,
}

#[derive(Deserialize, Debug, Clone, Copy)]
#[serde(deny_unknown_fields)]
struct FileProbe {
    center: f64,
    width: f64,
}

#[derive(Debug, Clone)]
pub struct JobConfig {
    pub params: ModelParams,
    pub numeric: NumericConfig,
    pub out: Option<PathBuf>,
    pub beta_grid: Option<Vec<f64>>,
}

fn read_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
}

impl JobArgs {
    /// Flags win over the config file; defaults fill whatever is left.
    pub fn resolve(&self) -> Result<JobConfig, CliError> {
        let file = match &self.config {
            Some(path) => read_file(path)?,
            None => FileConfig::default(),
        };
        let required = |flag: Option<f64>, file: Option<f64>, name: &str| {
            flag.or(file)
                .ok_or_else(|| CliError::Usage(format!("missing required parameter --{name}")))
        };
        let params = ModelParams::new(
            required(self.omega, file.omega, "omega")?,
            required(self.lambda, file.lambda, "lambda")?,
            required(self.delta, file.delta, "delta")?,
            self.m.or(file.m).unwrap_or(1.0),
            self.hbar.or(file.hbar).unwrap_or(1.0),
            self.beta.or(file.beta).unwrap_or(0.0),
        )
        .map_err(|e| CliError::Usage(e.to_string()))?;

        let defaults = NumericConfig::default();
        let numeric = NumericConfig {
            n: self.n.or(file.n).unwrap_or(defaults.n),
            p_max: self.pmax.or(file.pmax).unwrap_or(defaults.p_max),
            fd_order: self.fd_order.or(file.fd_order).unwrap_or(defaults.fd_order),
            levels: self.levels.or(file.levels).unwrap_or(defaults.levels),
            probes: file
                .probes
                .map(|ps| {
                    ps.into_iter()
                        .map(|p| ProbeSpec {
                            center: p.center,
                            width: p.width,
                        })
                        .collect()
                })
                .unwrap_or(defaults.probes),
            seed: self.seed.or(file.seed).unwrap_or(defaults.seed),
            exponent_override: self.exponent_override.or(file.exponent_override),
            ..defaults
        };
        numeric
            .validate()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(JobConfig {
            params,
            numeric,
            out: self.out.clone().or(file.out),
            beta_grid: self.beta_grid.clone().or(file.beta_grid),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn p1_args() -> JobArgs {
        JobArgs {
            omega: Some(1.0),
            lambda: Some(-0.5),
            delta: Some(0.5),
            ..Default::default()
        }
    }

    #[test]
    fn defaults() {
        let c = p1_args().resolve().unwrap();
        assert_eq!(c.params.beta(), 0.0);
        assert_eq!(c.params.m(), 1.0);
        assert_eq!(c.numeric.n, 1001);
        assert_eq!(c.numeric.p_max, 10.0);
        assert_eq!(c.numeric.fd_order, 4);
        assert_eq!(c.numeric.levels, 6);
        assert_eq!(c.numeric.seed, 42);
    }

    #[test]
    fn even_grid_is_rejected() {
        let args = JobArgs {
            n: Some(1000),
            ..p1_args()
        };
        assert!(matches!(args.resolve(), Err(CliError::Usage(_))));
    }

    #[test]
    fn flags_override_file() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        write!(
            f,
            r#"{{"omega": 2, "lambda": 0.1, "delta": 0.4, "beta": 0.1, "p_max": 7}}"#
        )
        .unwrap();
        let args = JobArgs {
            config: Some(f.path().to_path_buf()),
            beta: Some(0.0),
            ..Default::default()
        };
        let c = args.resolve().unwrap();
        assert_eq!(c.params.beta(), 0.0);
        assert_eq!(c.params.omega(), 2.0);
        assert_eq!(c.numeric.p_max, 7.0);
    }

    #[test]
    fn unknown_keys_and_missing_params_are_usage_errors() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        write!(f, r#"{{"omega": 1, "nonsense": 3}}"#).unwrap();
        let args = JobArgs {
            config: Some(f.path().to_path_buf()),
            ..Default::default()
        };
        assert!(matches!(args.resolve(), Err(CliError::Usage(_))));
        assert!(matches!(
            JobArgs::default().resolve(),
            Err(CliError::Usage(_))
        ));
    }
}
