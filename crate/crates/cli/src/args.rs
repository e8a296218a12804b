use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use divgame_core::{Monitoring, StoppingRule};

#[derive(Parser, Debug)]
#[command(name = "divgame", version, about = "Solve, verify and simulate the two-firm dividend game")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

/// Flags shared by every command. Any of them may also come from `--config`;
/// flags win over the file.
#[derive(Args, Debug, Default, Clone)]
pub struct Common {
    /// Drift while both firms are alive
    #[arg(long, global = true)]
    pub mu0: Option<f64>,
    /// Drift of the surviving monopolist
    #[arg(long = "mu-hat", global = true)]
    pub mu_hat: Option<f64>,
    #[arg(long, global = true)]
    pub sigma: Option<f64>,
    /// Discount rate
    #[arg(long, global = true)]
    pub r: Option<f64>,
    /// Initial cash of firm 1
    #[arg(long, global = true)]
    pub x0: Option<f64>,
    /// Initial cash of firm 2
    #[arg(long, global = true)]
    pub y0: Option<f64>,
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    #[arg(long, global = true)]
    pub horizon: Option<f64>,
    #[arg(long, global = true)]
    pub paths: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub monitoring: Option<MonitoringArg>,
    /// Worker threads for the simulations (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output file (default: standard output)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// JSON file with any of the flags above, in snake case
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Summary constants of the equilibrium
    Solve,
    /// The follower's free boundary b(x) on [0, a0 + margin]
    Boundary {
        #[arg(long, default_value_t = 1001)]
        points: usize,
        #[arg(long, default_value_t = 0.1)]
        margin: f64,
    },
    /// Follower value u2(x, z) on a grid over [0, a0] x [-x, a_hat + 1]
    Surface {
        #[arg(long, default_value_t = 101)]
        nx: usize,
        #[arg(long, default_value_t = 101)]
        nz: usize,
    },
    /// Monte Carlo payoffs of either equilibrium against their values
    Simulate {
        /// Defaults to symmetric when x0 = y0
        #[arg(long, value_enum)]
        game: Option<Game>,
    },
    /// Threshold deviations of one firm in the asymmetric game
    Deviate {
        #[arg(long, value_enum)]
        role: Role,
        /// Trial barriers (leader) or gaps (follower), comma separated
        #[arg(long, value_delimiter = ',')]
        values: Vec<f64>,
    },
    /// Finite-difference check of the follower's variational system
    Verify {
        #[arg(long, default_value_t = 200)]
        nx: usize,
        #[arg(long, default_value_t = 200)]
        nz: usize,
    },
    /// Payoff of moving first by fixed rules against the randomised opponent
    Indiff {
        /// `zero`, `horizon` or `hit:<level>`, comma separated
        #[arg(long = "rules", value_delimiter = ',', value_parser = parse_rule)]
        rules: Vec<StoppingRule>,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonitoringArg {
    Grid,
    Bridge,
}

impl From<MonitoringArg> for Monitoring {
    fn from(m: MonitoringArg) -> Self {
        match m {
            MonitoringArg::Grid => Monitoring::Grid,
            MonitoringArg::Bridge => Monitoring::Bridge,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Game {
    Asymmetric,
    Symmetric,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Leader,
    Follower,
}

pub fn parse_rule(s: &str) -> Result<StoppingRule, String> {
    match s.trim() {
        "zero" => Ok(StoppingRule::Zero),
        "horizon" => Ok(StoppingRule::Horizon),
        other => {
            let level = other
                .strip_prefix("hit:")
                .ok_or_else(|| format!("unknown rule `{other}`; expected zero, horizon or hit:<level>"))?;
            let level: f64 = level.parse().map_err(|e| format!("bad level in `{other}`: {e}"))?;
            if !level.is_finite() {
                return Err(format!("level in `{other}` must be finite"));
            }
            Ok(StoppingRule::FirstHitting(level))
        }
    }
}
