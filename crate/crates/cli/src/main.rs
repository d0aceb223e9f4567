use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use speclat_cli::{render, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = run(&cli);
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(render(&report, cli.format).as_bytes());
    ExitCode::from(report.exit_code as u8)
}
