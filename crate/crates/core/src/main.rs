use blockstack::cli::{run, Command};
use clap::Parser;
use std::io::Write;
use std::process::ExitCode;

/// Exact solvers for block stacking, airplane refueling and robust
/// appointment scheduling.
#[derive(Parser)]
#[command(name = "blockstack", version)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let result = run(args.command, &mut out, &mut err);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, blockstack::cli::CliError::CheckFailed) {
                let _ = writeln!(err, "error: {e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
