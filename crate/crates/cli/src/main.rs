mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{env_seed, Cli, Command, Config};

/// Exit status for usage and domain errors.
const EXIT_USAGE: u8 = 2;

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let config = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    match cli.command {
        Command::Eval(a) => commands::eval(config.merge("eval", a)?),
        Command::Verify(mut a) => {
            if a.seed.is_none() {
                a.seed = env_seed()?;
            }
            commands::verify(config.merge("verify", a)?)
        }
        Command::Geodesic(a) => commands::geodesic(config.merge("geodesic", a)?),
        Command::Navigate(mut a) => {
            if a.seed.is_none() {
                a.seed = env_seed()?;
            }
            commands::navigate(config.merge("navigate", a)?)
        }
        Command::Scan(a) => commands::scan(config.merge("scan", a)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
