//! Command-line front end: configuration parsing, dispatch and result emission.
//!
//! Exit codes: 0 success, 2 usage, 3 type mismatch, 4 missing setting,
//! 5 unknown setting, 6 runtime failure, 7 output I/O failure.

pub mod config;
pub mod emit;
pub mod error;
pub mod run;
pub mod schema;

use std::ffi::OsString;

pub use config::{parse_config, Format, RunConfig, Value};
pub use emit::{emit_results, render};
pub use error::CliError;
pub use run::{execute, Cell, Output};

/// Runs the program on `args` and returns the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let result = parse_config(args, None).and_then(|cfg| {
        let out = execute(&cfg)?;
        emit_results(&out, &cfg)
    });
    match result {
        Ok(()) => 0,
        Err(CliError::Info(text)) => {
            print!("{text}");
            0
        }
        Err(e) => {
            let msg = e.to_string();
            eprintln!("error: {}", msg.trim_end());
            e.exit_code()
        }
    }
}
