//! `odplab`: command-line front end for the odplab library.
//!
//! Exit codes: 0 success, 1 axiom violation or expectation mismatch,
//! 2 structural, budget or usage error. Errors go to stderr as `error: ...`.

mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Format};
use commands::{check_expectations, run, CliError};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if code == 2 {
                eprint!("error: {}", e.render().to_string().trim_start_matches("error: "));
            } else {
                let _ = e.print();
            }
            return ExitCode::from(code);
        }
    };
    if let Some(j) = cli.global.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            log::warn!("could not size the thread pool: {}", e);
        }
    }
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}

fn execute(cli: &Cli) -> Result<u8, CliError> {
    let out = run(&cli.command, &cli.global)?;
    let mismatches = match &cli.global.expect {
        Some(wanted) => check_expectations(&out, wanted)?,
        None => Vec::new(),
    };
    let rendered = out.render(cli.global.format)?;
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = stdout.write_all(rendered.as_bytes()).and_then(|_| stdout.flush()) {
        // A closed pipe downstream is not our failure.
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            return Err(CliError::Usage(format!("cannot write output: {}", e)));
        }
    }
    for m in &mismatches {
        eprintln!("error: expectation mismatch: {}", m);
    }
    if cli.global.format == Format::Dot {
        return Ok(0);
    }
    Ok(if out.violated || !mismatches.is_empty() { 1 } else { 0 })
}
