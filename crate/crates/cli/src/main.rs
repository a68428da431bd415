use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mimpeak::bench::Sweep;
use mimpeak::estimators::DenominatorForm;
use mimpeak::{IterationConfig, Method};
use mimpeak_cli::commands::{self, SweepOverrides};
use mimpeak_cli::{input, report, selfcheck, CliError};

/// Peak position estimation by mirroring and interpolation.
#[derive(Debug, Parser)]
#[command(name = "mimpeak", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate the peak of a spectrum CSV (`x,y` header).
    Estimate(EstimateArgs),
    /// Precision against noise level.
    SnrSweep(SweepArgs),
    /// Precision against sampling rate.
    RateSweep(SweepArgs),
    /// Precision against selection threshold.
    ThresholdSweep(SweepArgs),
    /// Run the built-in oracle and fixed-point checks.
    Selfcheck,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    input: PathBuf,
    #[arg(long, default_value = "mim2")]
    method: Method,
    /// Absolute selection threshold.
    #[arg(long)]
    threshold: Option<f64>,
    /// Threshold as a multiple of --sigma-n (default 0.5 when --sigma-n is set).
    #[arg(long)]
    threshold_multiplier: Option<f64>,
    /// Noise level of the input, used with the threshold multiplier.
    #[arg(long)]
    sigma_n: Option<f64>,
    #[arg(long, default_value_t = IterationConfig::default().tol)]
    tol: f64,
    #[arg(long, default_value_t = IterationConfig::default().max_iters)]
    max_iters: usize,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Flat key = value experiment file; a previous run's manifest works too.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Sampling rates, comma separated.
    #[arg(long, value_delimiter = ',')]
    rate: Option<Vec<f64>>,
    /// Noise levels, comma separated.
    #[arg(long, value_delimiter = ',')]
    sigma_n: Option<Vec<f64>>,
    /// Threshold multipliers, comma separated.
    #[arg(long, value_delimiter = ',')]
    threshold_multiplier: Option<Vec<f64>>,
    /// Estimators to run, comma separated.
    #[arg(long, value_delimiter = ',')]
    method: Option<Vec<Method>>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// Results CSV; the manifest is written beside it. Defaults to
    /// `<command>.csv`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run_estimate(a: EstimateArgs) -> Result<(), CliError> {
    let spectrum = input::read_spectrum(&a.input)?;
    let threshold = commands::resolve_threshold(a.threshold, a.threshold_multiplier, a.sigma_n)?;
    let cfg = IterationConfig::new(a.tol, a.max_iters).map_err(|e| CliError::Config(e.to_string()))?;
    let outcome = commands::estimate(&spectrum, a.method, threshold, &cfg)?;
    print!("{}", outcome.to_text());
    Ok(())
}

fn run_sweep(sweep: Sweep, a: SweepArgs) -> Result<(), CliError> {
    let overrides = SweepOverrides {
        config: a.config,
        trials: a.trials,
        seed: a.seed,
        rates: a.rate,
        sigma_n_levels: a.sigma_n,
        threshold_multipliers: a.threshold_multiplier,
        estimators: a.method,
        tol: a.tol,
        max_iters: a.max_iters,
    };
    let spec = commands::resolve_spec(sweep, &overrides)?;
    let out = a.out.unwrap_or_else(|| PathBuf::from(format!("{}.csv", sweep.name())));
    let table = commands::sweep(sweep, spec, out.clone())?;
    print!("{}", report::summary(&table));
    println!("wrote {} rows to {}", table.rows.len(), out.display());
    Ok(())
}

fn run_selfcheck() -> Result<(), CliError> {
    let report = selfcheck::run(DenominatorForm::FactorTwo);
    print!("{}", report.to_text());
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::SelfCheck(report.failed().join(", ")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Estimate(a) => run_estimate(a),
        Command::SnrSweep(a) => run_sweep(Sweep::Snr, a),
        Command::RateSweep(a) => run_sweep(Sweep::Rate, a),
        Command::ThresholdSweep(a) => run_sweep(Sweep::Threshold, a),
        Command::Selfcheck => run_selfcheck(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
