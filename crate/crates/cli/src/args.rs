//! Command-line flags.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "waldschmidt",
    version,
    about = "Initial degrees of fat point schemes and Waldschmidt bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// α(mZ) for one multiplicity.
    Alpha(AlphaArgs),
    /// α(mZ) for m = 1..m-max.
    Table(TableArgs),
    /// α-table plus Waldschmidt bounds and the Demailly / EV checks.
    Bounds(TableArgs),
    /// Seeded sweep over random configurations.
    Scan(ScanArgs),
    /// Star configuration of d general hyperplanes, checked against its closed form.
    Star(StarArgs),
    /// The 12-point Fermat configuration, checked against its closed form.
    Fermat12(FermatArgs),
    /// Exact sweep of the binomial inequality and its auxiliary polynomials.
    Lemma(LemmaArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Also print decimal approximations with this many places (text and CSV).
    #[arg(long)]
    pub decimals: Option<u32>,
}

#[derive(Debug, Clone, Args)]
pub struct EngineArgs {
    /// rational, eisenstein or prime:P.
    #[arg(long)]
    pub field: Option<String>,
    /// Comma-separated primes for the modular rank consensus.
    #[arg(long, value_delimiter = ',')]
    pub primes: Option<Vec<u64>>,
    /// Exact elimination for every rank instead of the modular consensus.
    #[arg(long)]
    pub exact: bool,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Include kernel certificates in the report.
    #[arg(long)]
    pub certificate: bool,
}

/// Where the points come from: a JSON file, or seeded random sampling.
#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    #[arg(long, conflicts_with_all = ["dim", "points"])]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct AlphaArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long)]
    pub m: u32,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long)]
    pub m_max: u32,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub points: usize,
    #[arg(long)]
    pub m_max: u32,
    #[arg(long)]
    pub trials: u32,
    /// Trial t uses seed + t.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct StarArgs {
    #[arg(long, required_unless_present = "hyperplanes")]
    pub dim: Option<usize>,
    /// Number of hyperplanes.
    #[arg(long, required_unless_present = "hyperplanes")]
    pub d: Option<usize>,
    /// Arrangement file instead of a random one.
    #[arg(long, conflicts_with_all = ["dim", "d"])]
    pub hyperplanes: Option<PathBuf>,
    #[arg(long)]
    pub m_max: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FermatArgs {
    #[arg(long, default_value_t = 6)]
    pub m_max: u32,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct LemmaArgs {
    #[arg(long, default_value_t = 10)]
    pub n_max: i64,
    #[arg(long, default_value_t = 10)]
    pub m_max: i64,
    #[arg(long, default_value_t = 10)]
    pub k_span: i64,
    /// The discriminant is swept over 1 ≤ m ≤ disc-max, 0 ≤ i ≤ disc-max.
    #[arg(long, default_value_t = 50)]
    pub disc_max: i64,
    /// Also write the JSON report to this file.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub jobs: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}
