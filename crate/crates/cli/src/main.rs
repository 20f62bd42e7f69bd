//! `voaplus`: JSON front end for the degree-2 algebra computations.

mod commands;
mod error;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;
use voaplus_core::autgroup::DistinguishedKind;

use commands::Input;
use error::CliError;

#[derive(Parser)]
#[command(
    name = "voaplus",
    version,
    about = "Exact computations in the degree-2 algebra of V_L^+ for rank-2 even lattices"
)]
struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Roots, norm-4 vectors and case of the lattice.
    Classify { path: PathBuf },
    /// Basis, multiplication table and form of the algebra.
    Build { path: PathBuf },
    /// Rational and quadratic-irrational idempotents.
    Idempotents {
        path: PathBuf,
        #[arg(long = "type", value_parser = clap::value_parser!(u8).range(0..=2))]
        kind: Option<u8>,
        /// Restrict to idempotents of this norm, as p/q.
        #[arg(long)]
        norm: Option<String>,
    },
    /// Virasoro vectors of a given central charge.
    Virasoro {
        path: PathBuf,
        #[arg(long, value_name = "P/Q")]
        central_charge: String,
    },
    /// Spectrum of the multiplication operator of an element.
    Spectrum {
        path: PathBuf,
        /// Coordinates in the basis reported by `build`, as "p/q,p/q,...".
        #[arg(long, allow_hyphen_values = true)]
        element: String,
    },
    /// Automorphism group permuting a distinguished set of idempotents.
    Aut {
        path: PathBuf,
        #[arg(long)]
        distinguished: Option<Kind>,
        /// Only require the product to be preserved, not the form.
        #[arg(long)]
        product_only: bool,
    },
    /// Run the built-in verification suite.
    VerifyPaper {
        /// Run a single criterion (1 to 9).
        #[arg(long)]
        criterion: Option<u8>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    VirasoroHalf,
    Type1Norm116,
}

impl From<Kind> for DistinguishedKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::VirasoroHalf => DistinguishedKind::VirasoroHalf,
            Kind::Type1Norm116 => DistinguishedKind::Type1Norm116,
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(s) = std::env::var("VOAPLUS_THREADS") else {
        return Ok(());
    };
    let n: usize = s
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("VOAPLUS_THREADS must be a positive integer, got {s:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot configure thread pool: {e}")))
}

fn emit(value: &Value, out: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Write { path: path.into(), source }),
        None => {
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let out = cli.out.as_deref();
    let value = match cli.command {
        Command::Classify { path } => commands::classify(&Input::read(&path)?)?,
        Command::Build { path } => commands::build(&Input::read(&path)?)?,
        Command::Idempotents { path, kind, norm } => {
            commands::idempotents(&Input::read(&path)?, kind, norm.as_deref())?
        }
        Command::Virasoro { path, central_charge } => commands::virasoro(&Input::read(&path)?, &central_charge)?,
        Command::Spectrum { path, element } => commands::spectrum(&Input::read(&path)?, &element)?,
        Command::Aut { path, distinguished, product_only } => {
            commands::aut(&Input::read(&path)?, distinguished.map(Into::into), product_only)?
        }
        Command::VerifyPaper { criterion } => {
            let (report, lines, passed) = commands::verify_paper(criterion)?;
            emit(&report, out)?;
            for l in &lines {
                eprintln!("{l}");
            }
            if !passed {
                let failed = lines.iter().filter(|l| l.contains(": FAIL")).count();
                return Err(CliError::CheckFailed(format!("{failed} of {} checks failed", lines.len())));
            }
            return Ok(());
        }
    };
    emit(&value, out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
