//! Benchmark CLI for the K-Sil clustering library.
//!
//! Subcommands: `cluster` runs one algorithm on a CSV and emits labels,
//! centroids and silhouette aggregates; `bench` runs the multi-trial
//! comparison protocol; `approx-eval` compares the silhouette
//! approximations against exact scores; `gen-data` writes a synthetic
//! dataset; `sweep-p` emits the objective-versus-sensitivity curve.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on data errors.

mod commands;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use ksil_core::{Objective, Sensitivity, WeightScheme, DEFAULT_P_GRID};

#[derive(Parser)]
#[command(
    name = "ksil",
    about = "Silhouette-guided instance-weighted k-means: clustering and benchmarks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cluster a CSV file and emit labels, centroids and silhouette scores
    Cluster(ClusterArgs),
    /// Run the multi-trial comparison protocol and emit a report
    Bench(BenchArgs),
    /// Compare approximate silhouette scores against exact ones
    ApproxEval(ApproxEvalArgs),
    /// Generate a synthetic dataset as CSV
    GenData(GenDataArgs),
    /// Emit objective-vs-sensitivity curve data for both weighting schemes
    SweepP(SweepPArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CliObjective {
    Macro,
    Micro,
    Combined,
}

impl CliObjective {
    fn to_objective(self, alpha: f64) -> Objective {
        match self {
            CliObjective::Macro => Objective::Macro,
            CliObjective::Micro => Objective::Micro,
            CliObjective::Combined => Objective::Combined { alpha },
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CliScheme {
    Power,
    Exp,
}

impl CliScheme {
    fn to_scheme(self) -> WeightScheme {
        match self {
            CliScheme::Power => WeightScheme::Power,
            CliScheme::Exp => WeightScheme::Exponential,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CliAlgo {
    Ksil,
    Kmeans,
    Density,
    Lof,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CliFamily {
    S1,
    S2,
    S3,
    S4,
    Blobs,
}

impl CliFamily {
    fn to_family(self) -> ksil_core::Family {
        match self {
            CliFamily::S1 => ksil_core::Family::S1,
            CliFamily::S2 => ksil_core::Family::S2,
            CliFamily::S3 => ksil_core::Family::S3,
            CliFamily::S4 => ksil_core::Family::S4,
            CliFamily::Blobs => ksil_core::Family::Blobs,
        }
    }
}

/// Input selection shared by the data-consuming subcommands: either a CSV
/// file or a synthetic family.
#[derive(Args)]
struct InputArgs {
    /// CSV file to load
    #[arg(short, long)]
    input: Option<std::path::PathBuf>,
    /// Treat the first CSV row as a header
    #[arg(long)]
    has_header: bool,
    /// Column (name or 0-based index) holding ground-truth labels
    #[arg(long)]
    label_column: Option<String>,
    /// Synthetic dataset family to generate instead of loading a file
    #[arg(long, value_enum)]
    family: Option<CliFamily>,
    /// Z-score standardize features before clustering
    #[arg(long)]
    standardize: bool,
}

/// Knobs of a single K-Sil configuration.
#[derive(Args)]
struct KsilArgs {
    /// Silhouette aggregation objective
    #[arg(long, value_enum, default_value = "macro")]
    objective: CliObjective,
    /// Mixing weight of the combined objective
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Weighting scheme
    #[arg(long, value_enum, default_value = "power")]
    scheme: CliScheme,
    /// Fixed weight-sensitivity value
    #[arg(long, conflicts_with = "auto_p")]
    p: Option<f64>,
    /// Auto-tune the weight sensitivity over the default grid
    #[arg(long)]
    auto_p: bool,
    /// Use the refined silhouette approximation inside the loop
    #[arg(long)]
    approx: bool,
    /// Evaluate at most this many points per iteration
    #[arg(long)]
    sample_size: Option<usize>,
    /// Centroid-movement convergence threshold
    #[arg(long, default_value_t = 1e-4)]
    tau: f64,
    /// Iteration cap
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
}

impl KsilArgs {
    fn objective(&self) -> Objective {
        self.objective.to_objective(self.alpha)
    }

    /// Fixed p when given, otherwise the auto grid; plain default p = 2.
    fn sensitivity(&self) -> Sensitivity {
        if self.auto_p {
            Sensitivity::Auto(DEFAULT_P_GRID.to_vec())
        } else {
            Sensitivity::Fixed(self.p.unwrap_or(2.0))
        }
    }
}

#[derive(Args)]
struct ClusterArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Number of clusters
    #[arg(long)]
    k: usize,
    /// Algorithm to run
    #[arg(long, value_enum, default_value = "ksil")]
    algo: CliAlgo,
    #[command(flatten)]
    ksil: KsilArgs,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory to write labels.csv, centroids.csv and report.json
    #[arg(short, long)]
    output: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Cluster counts to sweep, inclusive (e.g. 2..10)
    #[arg(long, default_value = "2..10")]
    k_range: String,
    /// Trials per cluster count
    #[arg(long, default_value_t = 30)]
    trials: usize,
    /// Algorithms to compare; the first is the candidate
    #[arg(long, value_enum, num_args = 1.., default_values_t = vec![CliAlgo::Ksil, CliAlgo::Kmeans, CliAlgo::Density, CliAlgo::Lof])]
    algo: Vec<CliAlgo>,
    #[command(flatten)]
    ksil: KsilArgs,
    /// Ground-truth cluster count (defaults to the label class count)
    #[arg(long)]
    gt_k: Option<usize>,
    /// Use a two-sided Wilcoxon test instead of the one-sided default
    #[arg(long)]
    two_sided: bool,
    /// Master RNG seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Path for the JSON report
    #[arg(short, long)]
    output: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct ApproxEvalArgs {
    /// CSV file to evaluate (default: the built-in synthetic battery)
    #[arg(short, long)]
    input: Option<std::path::PathBuf>,
    #[arg(long)]
    has_header: bool,
    #[arg(long)]
    label_column: Option<String>,
    /// Cluster count for a CSV input (defaults to the label class count)
    #[arg(long)]
    k: Option<usize>,
    /// Seed for the battery generators and the k-means partitions
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Path for the CSV table
    #[arg(short, long)]
    output: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct GenDataArgs {
    /// Dataset family
    #[arg(long, value_enum)]
    family: CliFamily,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path
    #[arg(short, long)]
    output: std::path::PathBuf,
    /// Points to generate (blobs family)
    #[arg(long, default_value_t = 500)]
    n: usize,
    /// Dimensions (blobs family)
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Clusters (blobs family)
    #[arg(long, default_value_t = 5)]
    k: usize,
    /// Cluster spread (blobs family)
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Fraction of uniform background noise (blobs family)
    #[arg(long, default_value_t = 0.0)]
    noise_fraction: f64,
}

#[derive(Args)]
struct SweepPArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Number of clusters (defaults to the family's ground-truth k)
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_enum, default_value = "macro")]
    objective: CliObjective,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long)]
    approx: bool,
    #[arg(long, default_value_t = 1e-4)]
    tau: f64,
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path (columns: p, scheme, objective_value)
    #[arg(short, long)]
    output: std::path::PathBuf,
}

/// Command failures split by exit code.
pub enum CmdError {
    Usage(String),
    Data(ksil_core::Error),
}

impl From<ksil_core::Error> for CmdError {
    fn from(e: ksil_core::Error) -> Self {
        CmdError::Data(e)
    }
}

pub type CmdResult = Result<(), CmdError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Cluster(args) => commands::cluster(args),
        Command::Bench(args) => commands::bench(args),
        Command::ApproxEval(args) => commands::approx_eval(args),
        Command::GenData(args) => commands::gen_data(args),
        Command::SweepP(args) => commands::sweep_p(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CmdError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            eprintln!("run `ksil --help` for the command contract");
            ExitCode::from(1)
        }
        Err(CmdError::Data(e)) => {
            eprintln!("data error: {e}");
            ExitCode::from(2)
        }
    }
}
