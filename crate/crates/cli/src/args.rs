use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "qwalk",
    version,
    about = "Classical and quantum walks on random networks"
)]
pub struct Cli {
    /// Worker threads for ensemble and scan runs.
    #[arg(long, global = true, env = "QWALK_WORKERS", value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: Option<u64>,

    /// Print progress and summaries to stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw a random graph and write it as an edge list.
    Gen(GenArgs),
    /// Eigenvalues (and optionally eigenvectors) of a graph Laplacian.
    Spectrum(SpectrumArgs),
    /// Time series of return or transition probabilities on one graph.
    Evolve(EvolveArgs),
    /// Long-time average of the quantum transition probability.
    Longtime(LongtimeArgs),
    /// Ensemble averages over independent realizations.
    Ensemble(EnsembleArgs),
    /// Sweep the long-time return probability over a parameter.
    #[command(subcommand)]
    Scan(ScanCommand),
    /// Continuum-limit return probabilities for the semicircle density.
    Continuum(ContinuumArgs),
    /// Power-law fit of a series CSV over a time window.
    Fit(FitArgs),
    /// Regenerate the data set for one standard figure.
    Figure(FigureArgs),
    /// Regenerate an output directory from its manifest.json.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelName {
    Er,
    Config,
    CompleteMinusM,
    Cycle,
    Complete,
}

impl ModelName {
    pub fn tag(self) -> &'static str {
        match self {
            ModelName::Er => "er",
            ModelName::Config => "config",
            ModelName::CompleteMinusM => "complete-minus-m",
            ModelName::Cycle => "cycle",
            ModelName::Complete => "complete",
        }
    }
}

/// Graph family flags shared by `gen` and `ensemble`.
#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: Option<ModelName>,
    /// Number of nodes.
    #[arg(long)]
    pub n: Option<usize>,
    /// Edge probability (er).
    #[arg(long)]
    pub p: Option<f64>,
    /// Degree (config).
    #[arg(long)]
    pub k: Option<usize>,
    /// Removed edges (complete-minus-m).
    #[arg(long)]
    pub m: Option<usize>,
    /// Resample until the graph is connected.
    #[arg(long)]
    pub require_connected: bool,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    /// Also write the eigenvector matrix, row-major.
    #[arg(long)]
    pub vectors: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GridKind {
    Lin,
    Log,
}

/// Time grid flags. Linear grids start at 0; log grids at `--tmin`.
#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, value_enum)]
    pub grid: Option<GridKind>,
    #[arg(long)]
    pub tmax: Option<f64>,
    /// Linear grid step.
    #[arg(long)]
    pub step: Option<f64>,
    /// First point of a log grid.
    #[arg(long)]
    pub tmin: Option<f64>,
    /// Number of points of a log grid.
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvolveKind {
    Classical,
    Quantum,
    Bound,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub kind: EvolveKind,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Write every matrix entry (`t,k,j,value`) instead of the node average.
    #[arg(long)]
    pub full_matrix: bool,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct LongtimeArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    /// Degeneracy tolerance relative to max(1, largest eigenvalue).
    #[arg(long)]
    pub degeneracy_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EnsembleArgs {
    /// JSON run configuration, or a manifest.json from an earlier run.
    /// Flags override values from the file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub realizations: Option<usize>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub degeneracy_tol: Option<f64>,
    #[arg(long)]
    pub bins: Option<usize>,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum ScanCommand {
    /// χ̄ against degree for ER and k-regular graphs.
    Degree(DegreeScanArgs),
    /// χ̄ against size at fixed degree, with a log-log fit.
    Size(SizeScanArgs),
    /// χ̄ on complete graphs with m edges removed, with an exponential fit.
    EdgeRemoval(EdgeRemovalArgs),
}

#[derive(Debug, Args)]
pub struct DegreeScanArgs {
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    pub degrees: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    pub realizations: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct SizeScanArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 50)]
    pub degree: usize,
    #[arg(long, default_value_t = 50)]
    pub realizations: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Sizes included in the fit, `lo:hi`.
    #[arg(long, value_parser = parse_window)]
    pub window: Option<(f64, f64)>,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct EdgeRemovalArgs {
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long = "m-values", value_delimiter = ',', required = true)]
    pub m_values: Vec<usize>,
    #[arg(long, default_value_t = 50)]
    pub realizations: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Removed-edge counts included in the fit, `lo:hi`.
    #[arg(long, value_parser = parse_window, default_value = "0:200")]
    pub window: (f64, f64),
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ContinuumKind {
    Classical,
    Amplitude,
}

#[derive(Debug, Args)]
pub struct ContinuumArgs {
    #[arg(long)]
    pub kbar: f64,
    #[arg(long, value_enum)]
    pub kind: ContinuumKind,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    /// Fit window `lo:hi` in the first column.
    #[arg(long, value_parser = parse_window, default_value = "10:100")]
    pub window: (f64, f64),
    /// Fit the local maxima of the series instead of every point.
    #[arg(long)]
    pub maxima: bool,
    /// Column to fit (default: the second).
    #[arg(long)]
    pub column: Option<String>,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(value_parser = ["fig1a", "fig1b", "fig2a", "fig2b", "fig2c", "fig3", "fig4", "fig5a", "fig5b", "fig6"])]
    pub figure: String,
    #[arg(long, default_value_t = qwalk_core::figures::DEFAULT_FIGURE_SEED)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
}

pub fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected lo:hi, got `{s}`"))?;
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad lower bound `{lo}`"))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad upper bound `{hi}`"))?;
    if !(lo < hi) {
        return Err(format!("window {lo}:{hi} is empty"));
    }
    Ok((lo, hi))
}
