mod args;
mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;
use divgame_core::EquilibriumSolution;

use args::{Cli, Command, Format};
use commands::Outcome;
use config::RunConfig;
use error::CliError;

fn dispatch(command: &Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let eq = EquilibriumSolution::new(cfg.params)?;
    match command {
        Command::Solve => commands::solve(cfg, &eq),
        Command::Boundary { points, margin } => commands::boundary(cfg, &eq, *points, *margin),
        Command::Surface { nx, nz } => commands::surface(cfg, &eq, *nx, *nz),
        Command::Simulate { game } => commands::simulate(cfg, &eq, *game),
        Command::Deviate { role, values } => commands::deviate(cfg, &eq, *role, values),
        Command::Verify { nx, nz } => commands::verify(cfg, &eq, *nx, *nz),
        Command::Indiff { rules } => commands::indiff(cfg, &eq, rules),
    }
}

fn default_format(command: &Command) -> Format {
    match command {
        Command::Boundary { .. } | Command::Surface { .. } | Command::Deviate { .. } => Format::Csv,
        _ => Format::Json,
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let mut cfg = RunConfig::resolve(&cli.common)?;
    cfg.format.get_or_insert(default_format(&cli.command));
    let outcome = match cfg.threads {
        None => dispatch(&cli.command, &cfg)?,
        Some(0) => return Err(CliError::Input("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Input(format!("cannot start {n} threads: {e}")))?
            .install(|| dispatch(&cli.command, &cfg))?,
    };
    output::emit(&outcome.bytes, cfg.out.as_deref())?;
    Ok(outcome.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("divgame: check failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("divgame: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
