use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use ptower_cli::{error_exit_code, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(error_exit_code(&e));
        }
    };
    print!("{}", report.to_table());
    if let Some(path) = &cli.command.common().json {
        if let Err(e) = std::fs::write(path, report.to_json())
            .with_context(|| format!("writing {}", path.display()))
        {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(report.exit_code())
}
