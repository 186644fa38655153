//! Command-line front end: algebra files in, verdicts and gauge results out.

pub mod commands;
pub mod corpus;
pub mod error;
pub mod file;
pub mod report;

use std::ffi::OsString;

use clap::Parser;

pub use commands::{execute, Cli, Command};
pub use error::CliError;
pub use file::{AlgebraFile, Kind, Loaded};
pub use report::{Report, Value};

/// What a run prints and how it exits.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// ANSI styling unless `NO_COLOR` is set to a non-empty value.
pub fn color_enabled() -> bool {
    std::env::var_os("NO_COLOR").is_none_or(|v| v.is_empty())
}

pub fn run<I, T>(args: I, color: bool) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match execute(&cli.command) {
        Ok(r) => Outcome {
            code: 0,
            stdout: if cli.json {
                r.to_json()
            } else {
                r.to_text(color)
            },
            stderr: String::new(),
        },
        Err(e) => {
            let code = e.exit_code();
            let mut r = Report::new(cli.command.name());
            r.text("error", e.to_string());
            if let Some(t) = e.triple() {
                r.push("triple", Value::Ints(t));
            }
            r.push("exit_code", Value::Int(code.into()));
            let stdout = if cli.json { r.to_json() } else { String::new() };
            Outcome {
                code,
                stdout,
                stderr: format!("error: {e}\n"),
            }
        }
    }
}
