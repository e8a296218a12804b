use std::path::PathBuf;

use divgame_core::{ModelParams, Monitoring, SimConfig};
use serde::Deserialize;

use crate::args::{Common, Format, MonitoringArg};
use crate::error::CliError;

/// Contents of a `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    mu0: Option<f64>,
    mu_hat: Option<f64>,
    sigma: Option<f64>,
    r: Option<f64>,
    x0: Option<f64>,
    y0: Option<f64>,
    dt: Option<f64>,
    horizon: Option<f64>,
    paths: Option<usize>,
    seed: Option<u64>,
    monitoring: Option<MonitoringArg>,
    threads: Option<usize>,
    out: Option<PathBuf>,
    format: Option<Format>,
}

/// Flags merged over the config file, with defaults filled in.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: ModelParams,
    pub x0: Option<f64>,
    pub y0: Option<f64>,
    pub dt: f64,
    pub horizon: f64,
    pub paths: usize,
    pub seed: u64,
    pub monitoring: Monitoring,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn resolve(flags: &Common) -> Result<Self, CliError> {
        let file = match &flags.config {
            None => FileConfig::default(),
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| CliError::Input(format!("bad config {}: {e}", path.display())))?
            }
        };
        let reference = ModelParams::reference();
        let params = ModelParams {
            mu0: flags.mu0.or(file.mu0).unwrap_or(reference.mu0),
            mu_hat: flags.mu_hat.or(file.mu_hat).unwrap_or(reference.mu_hat),
            sigma: flags.sigma.or(file.sigma).unwrap_or(reference.sigma),
            r: flags.r.or(file.r).unwrap_or(reference.r),
        };
        params.validate()?;
        let defaults = SimConfig::new(params, 0.0, 0.0);
        Ok(Self {
            params,
            x0: flags.x0.or(file.x0),
            y0: flags.y0.or(file.y0),
            dt: flags.dt.or(file.dt).unwrap_or(defaults.dt),
            horizon: flags.horizon.or(file.horizon).unwrap_or(defaults.horizon),
            paths: flags.paths.or(file.paths).unwrap_or(defaults.n_paths),
            seed: flags.seed.or(file.seed).unwrap_or(defaults.seed),
            monitoring: flags.monitoring.or(file.monitoring).map_or(defaults.monitoring, Into::into),
            threads: flags.threads.or(file.threads),
            out: flags.out.clone().or(file.out),
            format: flags.format.or(file.format),
        })
    }

    pub fn require_x0(&self, command: &str) -> Result<f64, CliError> {
        self.x0
            .ok_or_else(|| CliError::Input(format!("{command} needs --x0")))
    }

    pub fn sim(&self, x0: f64, y0: f64) -> Result<SimConfig, CliError> {
        let cfg = SimConfig {
            dt: self.dt,
            horizon: self.horizon,
            n_paths: self.paths,
            seed: self.seed,
            monitoring: self.monitoring,
            ..SimConfig::new(self.params, x0, y0)
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
