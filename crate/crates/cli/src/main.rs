//! `saw`: exact enumeration, verification suites and pivot sampling.

mod commands;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use saw_core::WalkClass;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "saw",
    version,
    about = "Self-avoiding walk enumeration and sampling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact counts and distributions by enumeration.
    Enumerate(EnumerateArgs),
    /// Run verification suites; exit 1 if any check fails.
    Verify(VerifyArgs),
    /// Pivot-chain estimates of the mean-square displacement exponent.
    Sample(SampleArgs),
    /// Delocalization quantities for every length up to `--n-max`.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ReportKind {
    Count,
    Endpoint,
    Midpoint,
    Hang,
    Closing,
    Series,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Suite {
    All,
    Mvm,
    Unfold,
    Hang,
    Growth,
    Hypergeom,
    Patterns,
}

#[derive(Args, Debug, Serialize)]
struct EnumerateArgs {
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Walk length.
    #[arg(short = 'n', long = "n")]
    n: usize,
    #[arg(long, default_value = "walk")]
    class: WalkClass,
    #[arg(long, value_enum, default_value_t = ReportKind::Count)]
    report: ReportKind,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Enumerate beyond the feasibility table.
    #[arg(long)]
    force: bool,
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Length for the selected suites; each suite has its own default.
    #[arg(short = 'n', long = "n")]
    n: Option<usize>,
    /// Renewal threshold for the insert-z audit.
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Perturb the reference value of the named check.
    #[arg(long, hide = true)]
    corrupt: Option<String>,
}

#[derive(Args, Debug, Serialize)]
struct SampleArgs {
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Comma-separated walk lengths.
    #[arg(long, value_delimiter = ',', default_value = "200,400,800,1600")]
    ladder: Vec<usize>,
    /// Samples per ladder length.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Accepted pivots before sampling; defaults to 10 n.
    #[arg(long)]
    warmup: Option<usize>,
    /// Proposals between samples; defaults to n / 10.
    #[arg(long)]
    thinning: Option<usize>,
    /// Motif whose per-step density is reported, as walk text.
    #[arg(long, default_value = "+1,+1")]
    probe: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also write every sampled walk, one per line.
    #[arg(long)]
    dump: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct ReportArgs {
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 16)]
    n_max: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    force: bool,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Infeasible(String),
    Failed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Infeasible(_) => 3,
        }
    }
}

impl From<saw_core::SawError> for CliError {
    fn from(e: saw_core::SawError) -> Self {
        match e {
            saw_core::SawError::Infeasible(m) => CliError::Infeasible(m),
            e => CliError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failed(e.to_string())
    }
}

fn set_threads(threads: Option<usize>) -> Result<(), CliError> {
    if let Some(t) = threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Failed(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Enumerate(a) => set_threads(a.threads).and_then(|_| commands::enumerate(a)),
        Command::Verify(a) => set_threads(a.threads).and_then(|_| verify::run(a)),
        Command::Sample(a) => set_threads(a.threads).and_then(|_| commands::sample(a)),
        Command::Report(a) => set_threads(a.threads).and_then(|_| commands::report(a)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Usage(m) => eprintln!("error: {m}"),
                CliError::Infeasible(m) => eprintln!("infeasible: {m}"),
                CliError::Failed(m) => eprintln!("failed: {m}"),
            }
            ExitCode::from(e.code())
        }
    }
}
