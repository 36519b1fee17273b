//! Command-line front end: `cgmldp <command> --config <path> [--key value ...]`.
//!
//! Exit codes: 0 success, 1 invalid input or config, 2 domain error,
//! 3 internal-consistency failure.

pub mod commands;
pub mod config;
pub mod output;

use std::io::Write;

use clap::{CommandFactory, Parser};

pub use commands::{dispatch, COMMANDS};
pub use config::{load, Format, KindSelection, RunConfig};
pub use output::{Cell, Table};

use crate::error::Error;

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidInput(_) => 1,
        Error::Domain(_) => 2,
        Error::Consistency(_) => 3,
    }
}

/// Keys that are not config fields are rejected later by [`load`].
#[derive(Debug, Parser)]
#[command(name = "cgmldp", version, about = "Rate functions and simulations for the inhomogeneous corner growth model")]
struct Invocation {
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(COMMANDS))]
    command: String,
    /// JSON config file; every field can also be given as `--key value`.
    #[arg(long)]
    config: Option<String>,
    /// Config overrides; values are parsed as JSON, falling back to a string.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "--KEY VALUE")]
    overrides: Vec<String>,
}

fn parse_args(args: &[String]) -> Result<(Invocation, Vec<(String, String)>), clap::Error> {
    let mut inv = Invocation::try_parse_from(std::iter::once("cgmldp").chain(args.iter().map(String::as_str)))?;
    let mut pairs = Vec::new();
    let mut it = std::mem::take(&mut inv.overrides).into_iter();
    while let Some(flag) = it.next() {
        let key = match flag.strip_prefix("--").filter(|k| !k.is_empty()) {
            Some(k) => k.replace('-', "_"),
            None => return Err(usage_error(format!("expected `--key value`, got `{flag}`"))),
        };
        let value = it.next().ok_or_else(|| usage_error(format!("flag `--{key}` needs a value")))?;
        if key == "config" {
            inv.config = Some(value);
        } else {
            pairs.push((key, value));
        }
    }
    Ok((inv, pairs))
}

fn usage_error(msg: String) -> clap::Error {
    Invocation::command().error(clap::error::ErrorKind::InvalidValue, msg)
}

fn configure_threads() {
    if let Some(n) = std::env::var("CGMLDP_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // fails only if a pool already exists, in which case it is kept
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn execute(inv: Invocation, overrides: &[(String, String)], stdout: &mut dyn Write) -> Result<(), Error> {
    let document = match &inv.config {
        Some(path) => {
            std::fs::read_to_string(path).map_err(|e| Error::invalid(format!("cannot read config `{path}`: {e}")))?
        }
        None => "{}".to_owned(),
    };
    let cfg = load(&document, overrides)?;
    configure_threads();
    let table = dispatch(&inv.command, &cfg)?;
    match &cfg.output {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(|e| Error::invalid(format!("field `output`: {e}")))?;
            table.write(std::io::BufWriter::new(file), cfg.format)
        }
        None => table.write(stdout, cfg.format),
    }
}

/// Runs one invocation (arguments after the program name), writing the
/// table to `stdout` or the configured file and errors to `stderr`.
/// Returns the process exit code.
pub fn run(args: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let (inv, overrides) = match parse_args(args) {
        Ok(parsed) => parsed,
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{e}");
            return 0;
        }
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return 1;
        }
    };
    match execute(inv, &overrides, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "cgmldp: {e}");
            exit_code(&e)
        }
    }
}
