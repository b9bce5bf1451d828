mod args;
mod commands;
mod parse;

use clap::Parser;
use std::io::Write;
use std::process::ExitCode;

use args::{Cli, Command, ConfigFile};
use commands::{exit, CliError, Context, Outcome};
use obsclone::Exec;

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let config = match &cli.config {
        Some(path) => ConfigFile::load(path).map_err(CliError::usage)?,
        None => ConfigFile::default(),
    };
    let out_flag = out_path(&cli.command);
    let ctx = Context { exec: if cli.sequential { Exec::Sequential } else { Exec::Parallel }, config };
    let outcome = match &cli.command {
        Command::List(a) => commands::list(&ctx, a),
        Command::Verify(a) => commands::verify(&ctx, a),
        Command::Sweep(a) => commands::sweep(&ctx, a),
        Command::Nogo(a) => commands::nogo(&ctx, a),
        Command::Compare(a) => commands::compare(&ctx, a),
    }?;
    match out_flag.or(ctx.config.out.clone()) {
        Some(path) => std::fs::write(&path, &outcome.body)
            .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))?,
        None => std::io::stdout().write_all(outcome.body.as_bytes()).map_err(|e| CliError::io(e.to_string()))?,
    }
    Ok(outcome)
}

fn out_path(cmd: &Command) -> Option<std::path::PathBuf> {
    match cmd {
        Command::List(a) => a.common.out.clone(),
        Command::Verify(a) => a.common.out.clone(),
        Command::Sweep(a) => a.common.out.clone(),
        Command::Nogo(a) => a.common.out.clone(),
        Command::Compare(a) => a.common.out.clone(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) if outcome.passed => ExitCode::from(exit::SUCCESS),
        Ok(_) => ExitCode::from(exit::VERIFICATION_FAILED),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
