//! Command-line front end: algebra description files, reports and the
//! `info`, `decompose`, `check` and `construct` commands.

pub mod commands;
pub mod document;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use commands::{ConstructOp, Suite};
pub use document::{AlgebraDocument, DocumentError, Expectation};
pub use report::{CheckResult, Report, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "speclat",
    version,
    about = "Exact checks on finite-dimensional convex effect algebras"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rays, states, sharp one-dimensional effects and contexts.
    Info { file: PathBuf },
    /// Spectral decomposition of one effect, or a witness that none exists.
    Decompose {
        file: PathBuf,
        /// Comma-separated coordinates, e.g. "1/2,3/10,0".
        #[arg(long, allow_hyphen_values = true)]
        effect: String,
    },
    /// Run the property suites applicable to the algebra.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
    /// Build a direct product or direct convex sum and write it out.
    Construct {
        #[arg(value_enum)]
        op: ConstructOp,
        left: PathBuf,
        right: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

pub fn run(cli: &Cli) -> Report {
    match &cli.command {
        Command::Info { file } => commands::run_or_report("info", || commands::info(file)),
        Command::Decompose { file, effect } => {
            commands::run_or_report("decompose", || commands::decompose(file, effect))
        }
        Command::Check { file, suite } => {
            commands::run_or_report("check", || commands::check(file, *suite))
        }
        Command::Construct {
            op,
            left,
            right,
            out,
        } => {
            let out = out
                .clone()
                .unwrap_or_else(|| commands::default_output(left, right, *op));
            commands::run_or_report("construct", || commands::construct(*op, left, right, &out))
        }
    }
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    }
}
