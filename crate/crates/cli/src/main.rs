//! `hosc`: run verification suites, evaluate norms and propagate fields.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::Format;

const GRAMMAR: &str = "\
Exponents are comma-separated decimals written with `.`; `inf` means ∞ (e.g. --p 1.5,2,4,inf).
Cutoffs and degrees are comma-separated integers.

Exit codes: 0 pass, 1 the suite ran and failed, 2 invalid input or violated hypothesis,
3 the discretization could not reach the requested accuracy.

HOSC_THREADS caps the number of worker threads.";

#[derive(Parser, Debug)]
#[command(name = "hosc", version, about = "Harmonic-oscillator spectral toolkit", after_help = GRAMMAR)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a verification suite and write its report.
    Verify(SuiteArgs),
    /// Tabulate the empirical constant across cutoffs and exponents (CSV).
    Sweep(SuiteArgs),
    /// Evaluate a norm of a field.
    Norm(NormArgs),
    /// Evolve a field and write the space-time samples.
    Propagate(PropagateArgs),
}

#[derive(Args, Debug, Clone)]
struct ConfigArgs {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the fully resolved configuration to this path.
    #[arg(long)]
    write_config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct SuiteArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Suite name, e.g. identity-sqrt2pi or main-theorem.
    #[arg(long)]
    suite: Option<String>,
    /// Spatial dimension n.
    #[arg(long = "dim")]
    dimension: Option<usize>,
    /// Level cutoff(s) L.
    #[arg(long = "cutoff", value_delimiter = ',')]
    cutoffs: Option<Vec<usize>>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    q: Option<String>,
    /// Smoothness s (defaults to s_q where the suite needs one).
    #[arg(long, allow_negative_numbers = true)]
    s: Option<f64>,
    /// Wainger r, or the smoothness used by tl-embeddings.
    #[arg(long)]
    r: Option<String>,
    /// Times, comma-separated.
    #[arg(long)]
    t: Option<String>,
    /// Trigonometric degrees D (wainger).
    #[arg(long, value_delimiter = ',')]
    degrees: Option<Vec<usize>>,
    /// Multipliers such as indicator,power:-1,phase:0.7,decay:0.3,random.
    #[arg(long, allow_hyphen_values = true)]
    multipliers: Option<String>,
    /// single-eigenfunction, random-band-limited, gaussian or gaussian-perturbed.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Draw real coefficients only.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    real: Option<bool>,
    #[arg(long)]
    tolerance: Option<f64>,
    /// Output path (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug, Clone)]
struct NormArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Field JSON: {"dimension", "cutoff", "coefficients": [[re, im], ...]}.
    #[arg(long)]
    field: Option<PathBuf>,
    /// Lp:p=2, MixedXT:p=4,q=2[,T=..], MixedTX:q=2,p=4, TL:r=1,p=2,q=2, SobolevH2:s=1, SobolevWp:s=1,p=4.
    #[arg(long)]
    spec: Option<String>,
    /// Gauss–Hermite order per axis (default L + 12).
    #[arg(long)]
    order: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct PropagateArgs {
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long)]
    field: Option<PathBuf>,
    /// oscillator, heat or free.
    #[arg(long)]
    evolution: Option<String>,
    /// Explicit times, comma-separated.
    #[arg(long, allow_negative_numbers = true)]
    t: Option<String>,
    /// Periodic time grid [0, T) with --steps nodes (T defaults to 2π).
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// Gauss–Hermite order per axis of the spatial grid (default L + 12).
    #[arg(long)]
    order: Option<usize>,
    /// Write the evolved coefficients instead of samples (oscillator, heat; one time).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    spectral: Option<bool>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn configure_threads() -> hosc_core::Result<()> {
    let Ok(value) = std::env::var("HOSC_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| hosc_core::Error::InvalidInput(format!("HOSC_THREADS must be a positive integer, got `{value}`")))?;
    // A second initialization only happens in tests; keep the existing pool.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| commands::dispatch(cli.command));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
