use std::io::Write;
use std::process::ExitCode;

use walkers_cli::{run_args, TOLERANCE_VAR};

fn main() -> ExitCode {
    let tol = std::env::var(TOLERANCE_VAR).ok();
    let outcome = run_args(std::env::args_os(), tol.as_deref());
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.status as u8)
}
