use std::io;
use std::process::ExitCode;

use clap::Parser;
use fogsim::{run, Cli, CliError};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let mut stdout = io::stdout().lock();
    match run(&cli, &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = match e {
                CliError::Usage(_) => "usage error",
                CliError::Config(_) => "configuration error",
                CliError::Numeric(_) => "numeric error",
                CliError::Io(_) => "i/o error",
            };
            eprintln!("fogsim: {kind}: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
