//! `braketsim` command-line front end.
//!
//! Exit codes: 0 all assertions passed / state is a product, 1 an assertion
//! failed / state is entangled, 2 lex, parse or evaluation error, 3 I/O error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use crate::amplitude::{Amplitude, Backend};
use crate::dsl::{run_source, DslError};
use crate::scalar::ExactScalar;
use crate::separability::SchmidtReport;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_LANGUAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// The step-by-step Hadamard derivation on the Bell state, checked exactly.
pub const REPRO_COMMENT_SCRIPT: &str = "\
# Reproduction of the comment's derivation
state (|00> + |11>) / sqrt2
assert_entangled 0
apply H 0
assert_state (|00> + |01> + |10> - |11>) / 2
assert_entangled 0
apply H 1
assert_state (|00> + |11>) / sqrt2
assert_entangled 0
";

#[derive(Debug, Parser)]
#[command(name = "braketsim", version, about = "Exact state-vector checks for Dirac-notation derivations")]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a `.bkt` verification script and print its report.
    Run {
        script_path: PathBuf,
        #[arg(long, value_enum, default_value_t = Backend::Exact)]
        backend: Backend,
        #[arg(long)]
        verbose: bool,
    },
    /// Replay the H₁H₂ derivation on the Bell state.
    ReproComment {
        #[arg(long, value_enum, default_value_t = Backend::Exact)]
        backend: Backend,
        #[arg(long)]
        verbose: bool,
    },
    /// Run a script and report the Schmidt rank of its final state across
    /// `{qubit} | rest`.
    Schmidt {
        script_path: PathBuf,
        #[arg(long)]
        qubit: usize,
        #[arg(long, value_enum, default_value_t = Backend::Exact)]
        backend: Backend,
    },
}

fn report_dsl_error(err: &mut dyn Write, path: &str, e: &DslError) -> i32 {
    let _ = writeln!(err, "{path}: {e}");
    EXIT_LANGUAGE
}

fn read_script(path: &Path, err: &mut dyn Write) -> Result<String, i32> {
    std::fs::read_to_string(path).map_err(|e| {
        let _ = writeln!(err, "{}: {e}", path.display());
        EXIT_IO
    })
}

fn run_text<A: Amplitude>(
    text: &str,
    origin: &str,
    verbose: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    match run_source::<A>(text) {
        Ok(report) => {
            let _ = out.write_all(report.render(verbose).as_bytes());
            if report.failures == 0 {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Err(e) => report_dsl_error(err, origin, &e),
    }
}

pub fn cmd_run(path: &Path, backend: Backend, verbose: bool, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let text = match read_script(path, err) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let origin = path.display().to_string();
    match backend {
        Backend::Exact => run_text::<ExactScalar>(&text, &origin, verbose, out, err),
        Backend::Float => run_text::<Complex64>(&text, &origin, verbose, out, err),
    }
}

pub fn cmd_repro_comment(backend: Backend, verbose: bool, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let origin = "<repro-comment>";
    match backend {
        Backend::Exact => run_text::<ExactScalar>(REPRO_COMMENT_SCRIPT, origin, verbose, out, err),
        Backend::Float => run_text::<Complex64>(REPRO_COMMENT_SCRIPT, origin, verbose, out, err),
    }
}

fn schmidt_text<A: Amplitude>(text: &str, origin: &str, qubit: usize, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let report = match run_source::<A>(text) {
        Ok(r) => r,
        Err(e) => return report_dsl_error(err, origin, &e),
    };
    match SchmidtReport::new(&report.final_state, &[qubit]) {
        Ok(s) => {
            let _ = write!(out, "{s}");
            if s.entangled {
                EXIT_FAILED
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let _ = writeln!(err, "{origin}: {e}");
            EXIT_LANGUAGE
        }
    }
}

pub fn cmd_schmidt(path: &Path, qubit: usize, backend: Backend, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let text = match read_script(path, err) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let origin = path.display().to_string();
    match backend {
        Backend::Exact => schmidt_text::<ExactScalar>(&text, &origin, qubit, out, err),
        Backend::Float => schmidt_text::<Complex64>(&text, &origin, qubit, out, err),
    }
}

/// Parses `args` (including the program name) and dispatches.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                EXIT_LANGUAGE
            } else {
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    match config.command {
        Command::Run {
            script_path,
            backend,
            verbose,
        } => cmd_run(&script_path, backend, verbose, out, err),
        Command::ReproComment { backend, verbose } => cmd_repro_comment(backend, verbose, out, err),
        Command::Schmidt {
            script_path,
            qubit,
            backend,
        } => cmd_schmidt(&script_path, qubit, backend, out, err),
    }
}
