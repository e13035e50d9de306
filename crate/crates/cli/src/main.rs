use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use kframe_cli::{run_job, Command, JobSpec};
use kframe_core::Tolerances;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "kframe",
    version,
    about = "K-frame, K-dual and multiplier certificates",
    allow_negative_numbers = true
)]
struct Args {
    command: Command,
    /// Frame file; repeat for commands that take two frames.
    #[arg(long = "frame")]
    frames: Vec<PathBuf>,
    /// Operator K as a square matrix file (default: the identity).
    #[arg(long)]
    operator: Option<PathBuf>,
    /// Symbol file for multiplier commands.
    #[arg(long)]
    symbol: Option<PathBuf>,
    /// Identity tolerance.
    #[arg(long, value_parser = positive)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// RNG seed for dual-family (a fixed default otherwise).
    #[arg(long)]
    seed: Option<u64>,
    /// Stated lower bound A (with --upper).
    #[arg(long, requires = "upper", value_parser = positive)]
    lower: Option<f64>,
    /// Stated upper bound B (with --lower).
    #[arg(long, requires = "lower", value_parser = positive)]
    upper: Option<f64>,
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err("must be positive and finite".into())
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut spec = JobSpec::new(args.command);
    spec.frames = args.frames;
    spec.operator = args.operator;
    spec.symbol = args.symbol;
    spec.seed = args.seed;
    if let Some(t) = args.tol {
        spec.tolerances = Tolerances::with_identity(t);
    }
    spec.bounds = args.lower.zip(args.upper);
    let report = run_job(&spec);
    let out = match args.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json_string() + "\n",
    };
    // A closed pipe downstream is not a failure of the run.
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
    if let Some(e) = &report.error {
        eprintln!("kframe: {}", e.message);
    }
    ExitCode::from(report.exit_code())
}
