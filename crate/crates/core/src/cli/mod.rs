//! The `zenscope` command line: one subcommand per pipeline stage, files
//! between stages, and a manifest stamping every run.

mod args;
mod commands;
mod output;

use std::ffi::OsString;

use clap::Parser;

pub use args::{Cli, Command};
pub use output::{Manifest, ManifestEntry};

use crate::error::Error;

/// Exit status for success, caller errors and internal faults.
pub const EXIT_OK: i32 = 0;
pub const EXIT_USER: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code. Messages go to stderr.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USER } else { EXIT_OK };
        }
    };
    match commands::execute(&cli) {
        Ok(manifest) => {
            eprintln!(
                "zenscope {}: wrote {} artifact(s) to {}",
                manifest.command,
                manifest.artifacts.len(),
                cli.out_dir.display()
            );
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_user_error() {
        EXIT_USER
    } else {
        EXIT_INTERNAL
    }
}
