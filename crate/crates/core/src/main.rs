use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use ocf::cli::{repl, run_checks, ErrorKind, Session};

/// Belief revision over ordinal conditional functions.
///
/// With no flags, starts an interactive session on stdin.
#[derive(Parser)]
#[command(version)]
struct Args {
    /// Run the commands in FILE and exit.
    #[arg(long, value_name = "FILE", conflicts_with = "check")]
    script: Option<PathBuf>,

    /// Run the built-in example scripts against their recorded output.
    #[arg(long)]
    check: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();

    if args.check {
        return match run_checks(&mut out) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(1),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(ErrorKind::Io.exit_code() as u8)
            }
        };
    }

    if let Some(path) = args.script {
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", path.display());
                return ExitCode::from(ErrorKind::Io.exit_code() as u8);
            }
        };
        let result = Session::new().run(&text, &mut out);
        let _ = out.flush();
        return match result {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("{}:{e}", path.display());
                ExitCode::from(e.exit_code() as u8)
            }
        };
    }

    match repl(io::stdin().lock(), &mut out) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(ErrorKind::Io.exit_code() as u8)
        }
    }
}
