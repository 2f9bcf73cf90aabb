//! Command-line front end: evaluates capacity bounds for channel specs and
//! writes a deterministic report.
//!
//! Exit codes: 0 success, 2 configuration error, 3 input error (no report),
//! 4 optimizer non-convergence, 5 invariant violation. Wall time goes to
//! stderr so the report itself stays reproducible.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;

use assisted_capacity::report::{
    emit, run, Analysis, ExitStatus, OutputFormat, RunConfig, RunError, Tolerances,
};

#[derive(Debug, Parser)]
#[command(name = "assisted-capacity", version, about = "Bounds on environment-assisted channel capacities")]
struct Cli {
    /// Channel-spec JSON file; repeat for several channels.
    #[arg(long = "spec", value_name = "PATH")]
    specs: Vec<PathBuf>,

    /// Comma-separated analyses, or `all`.
    #[arg(long, value_name = "LIST", default_value = "all")]
    analyses: String,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// json, csv or markdown.
    #[arg(long, default_value = "json")]
    format: String,

    /// Output file; stdout when absent.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Tolerance override KEY=VAL with KEY one of tau_ent, tau_opt, tau_psd, epsilon.
    #[arg(long = "tol", value_name = "KEY=VAL")]
    tol: Vec<String>,
}

fn config_from(cli: Cli) -> Result<(RunConfig, Option<PathBuf>), RunError> {
    let analyses = if cli.analyses.trim() == "all" {
        Analysis::ALL.to_vec()
    } else {
        RunConfig::parse_analyses(&cli.analyses)?
    };
    let format: OutputFormat = cli.format.parse().map_err(RunError::config)?;
    let mut tolerances = Tolerances::default();
    for t in &cli.tol {
        tolerances.set(t).map_err(RunError::config)?;
    }
    let config = RunConfig::new(cli.specs, analyses, cli.seed, format, tolerances)?;
    Ok((config, cli.out))
}

fn exit(status: ExitStatus) -> ExitCode {
    ExitCode::from(status.code() as u8)
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => exit(ExitStatus::ConfigError),
            };
        }
    };
    let (config, out) = match config_from(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit(e.status);
        }
    };
    let report = match run(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit(e.status);
        }
    };
    let text = emit(&report, config.format);
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return exit(ExitStatus::InputError);
            }
        }
        None => print!("{text}"),
    }
    for reason in &report.status.reasons {
        eprintln!("warning: {reason}");
    }
    eprintln!("wall time: {:.3} s", start.elapsed().as_secs_f64());
    exit(report.exit_status())
}
