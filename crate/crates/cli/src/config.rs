//! Command-line surface. Every option can also be set through an environment
//! variable named `SUBSEQ_DTW_<FLAG>` (upper case, dashes as underscores).

use std::fmt;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use subseq_dtw::io::SeriesFormat;
use subseq_dtw::layout::CascadeOrder;

#[derive(Debug, Parser)]
#[command(name = "subseq-dtw", version, about = "Best-match subsequence search under banded DTW")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find the best match of a query in a series.
    Search(SearchArgs),
    /// Run every search path on one input and check they agree.
    Verify(VerifyArgs),
    /// Sweep thread counts, radii and query lengths; emit CSV.
    Bench(BenchArgs),
    /// Write a random-walk series (and optionally a query) to disk.
    Generate(GenerateArgs),
    /// Print the fragment manifest for a series.
    Partition(PartitionArgs),
    /// Search one fragment as a member of a TCP cluster.
    Worker(WorkerArgs),
    /// Host the reductions for a TCP cluster.
    Coordinate(CoordinateArgs),
}

/// Warping-window radius: an absolute count or a fraction of the query length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadiusSpec {
    Absolute(usize),
    Fraction(f64),
}

impl RadiusSpec {
    /// Fractions resolve to round(f·n); the result is clipped to n.
    pub fn resolve(self, n: usize) -> usize {
        match self {
            RadiusSpec::Absolute(r) => r.min(n),
            RadiusSpec::Fraction(f) => ((f * n as f64).round() as usize).min(n),
        }
    }
}

impl FromStr for RadiusSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Some(frac) = s.strip_suffix(['n', 'N']) {
            let f = if frac.is_empty() {
                1.0
            } else {
                frac.parse::<f64>().map_err(|e| format!("bad radius {s:?}: {e}"))?
            };
            if !(f.is_finite() && f >= 0.0) {
                return Err(format!("bad radius {s:?}: fraction must be non-negative"));
            }
            return Ok(RadiusSpec::Fraction(f));
        }
        s.parse::<usize>().map(RadiusSpec::Absolute).map_err(|e| format!("bad radius {s:?}: {e}"))
    }
}

impl fmt::Display for RadiusSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadiusSpec::Absolute(r) => write!(f, "{r}"),
            RadiusSpec::Fraction(x) => write!(f, "{x}n"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransportKind {
    Inproc,
    Tcp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputKind {
    Human,
    Json,
}

fn parse_format(s: &str) -> Result<SeriesFormat, String> {
    s.parse().map_err(|e: subseq_dtw::Error| e.to_string())
}

fn parse_cascade(s: &str) -> Result<CascadeOrder, String> {
    s.parse().map_err(|e: subseq_dtw::Error| e.to_string())
}

/// Where the series and query come from.
#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Series file; a random walk of length --m is generated when absent.
    #[arg(long, env = "SUBSEQ_DTW_SERIES")]
    pub series: Option<PathBuf>,
    /// Query file; a random walk of length --n is generated when absent.
    #[arg(long, env = "SUBSEQ_DTW_QUERY")]
    pub query: Option<PathBuf>,
    /// File format; guessed from the extension when absent.
    #[arg(long, env = "SUBSEQ_DTW_FORMAT", value_parser = parse_format)]
    pub format: Option<SeriesFormat>,
    /// Length of the generated series.
    #[arg(long, env = "SUBSEQ_DTW_M", default_value_t = 100_000)]
    pub m: usize,
    /// Query length. Must match the query file when both are given.
    #[arg(long, env = "SUBSEQ_DTW_N")]
    pub n: Option<usize>,
    #[arg(long, env = "SUBSEQ_DTW_SEED", default_value_t = subseq_dtw::search::DEFAULT_SEED)]
    pub seed: u64,
}

/// Knobs of the search itself.
#[derive(Debug, Clone, Args)]
pub struct TuningArgs {
    /// Warping radius: an integer, or a fraction of n such as "0.5n".
    #[arg(long, env = "SUBSEQ_DTW_R", default_value = "0.5n")]
    pub r: RadiusSpec,
    /// Worker threads per fragment; defaults to the available cores.
    #[arg(long, env = "SUBSEQ_DTW_THREADS")]
    pub threads: Option<usize>,
    /// Rows each thread takes per round.
    #[arg(long, env = "SUBSEQ_DTW_SEGMENT", default_value_t = subseq_dtw::search::DEFAULT_SEGMENT)]
    pub segment: usize,
    /// Vector width rows are padded to.
    #[arg(long, env = "SUBSEQ_DTW_WIDTH", default_value_t = subseq_dtw::search::DEFAULT_WIDTH)]
    pub width: usize,
    #[arg(long, env = "SUBSEQ_DTW_EARLY_ABANDON", default_value_t = true, action = clap::ArgAction::Set)]
    pub early_abandon: bool,
    /// Standard deviation below which a sequence normalizes to zeros.
    #[arg(long, env = "SUBSEQ_DTW_EPSILON", default_value_t = 1e-12)]
    pub epsilon: f64,
    /// Lower-bound order, e.g. "kim,ec,eq".
    #[arg(long, env = "SUBSEQ_DTW_CASCADE", value_parser = parse_cascade)]
    pub cascade: Option<CascadeOrder>,
    /// Refuse fragments whose working set exceeds this many bytes.
    #[arg(long, env = "SUBSEQ_DTW_MEMORY_BUDGET")]
    pub memory_budget: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct ClusterArgs {
    #[arg(long, env = "SUBSEQ_DTW_FRAGMENTS", default_value_t = 1)]
    pub fragments: usize,
    #[arg(long, env = "SUBSEQ_DTW_TRANSPORT", value_enum, default_value_t = TransportKind::Inproc)]
    pub transport: TransportKind,
    /// Address the built-in coordinator binds for --transport tcp.
    #[arg(long, env = "SUBSEQ_DTW_COORDINATOR", default_value = "127.0.0.1:0")]
    pub coordinator: SocketAddr,
    /// Local rounds between two reductions.
    #[arg(long, env = "SUBSEQ_DTW_ROUNDS_PER_REDUCTION", default_value_t = 1)]
    pub rounds_per_reduction: u32,
    /// Seconds to wait on a peer before failing.
    #[arg(long, env = "SUBSEQ_DTW_TIMEOUT", default_value_t = 30.0)]
    pub timeout: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub tuning: TuningArgs,
    #[command(flatten)]
    pub cluster: ClusterArgs,
    #[arg(long, env = "SUBSEQ_DTW_OUTPUT", value_enum, default_value_t = OutputKind::Human)]
    pub output: OutputKind,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub search: SearchArgs,
    /// Corrupt the lower bounds of the true best row before the local search.
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub tuning: TuningArgs,
    /// Thread counts to sweep.
    #[arg(long, env = "SUBSEQ_DTW_SWEEP_THREADS", value_delimiter = ',', default_value = "1,2,4")]
    pub sweep_threads: Vec<usize>,
    /// Radii to sweep.
    #[arg(long, env = "SUBSEQ_DTW_SWEEP_R", value_delimiter = ',', default_value = "0.1n,0.5n,1n")]
    pub sweep_r: Vec<RadiusSpec>,
    /// Query lengths to sweep; defaults to --n.
    #[arg(long, env = "SUBSEQ_DTW_SWEEP_N", value_delimiter = ',')]
    pub sweep_n: Vec<usize>,
    /// Timed runs per cell; the fastest is reported.
    #[arg(long, env = "SUBSEQ_DTW_REPEAT", default_value_t = 1)]
    pub repeat: usize,
    /// Write the CSV here instead of stdout.
    #[arg(long, env = "SUBSEQ_DTW_CSV")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[arg(long, env = "SUBSEQ_DTW_M", default_value_t = 100_000)]
    pub m: usize,
    #[arg(long, env = "SUBSEQ_DTW_N", default_value_t = 128)]
    pub n: usize,
    #[arg(long, env = "SUBSEQ_DTW_SEED", default_value_t = subseq_dtw::search::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, env = "SUBSEQ_DTW_FORMAT", value_parser = parse_format)]
    pub format: Option<SeriesFormat>,
    /// Series output path.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write a random-walk query of length --n here.
    #[arg(long)]
    pub query_out: Option<PathBuf>,
    /// Embed the query at this 1-based position of the series.
    #[arg(long, requires = "query_out")]
    pub plant_at: Option<usize>,
    /// Amplitude of the uniform noise added to the planted copy.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
}

#[derive(Debug, Clone, Args)]
pub struct PartitionArgs {
    /// Series file whose length is used; otherwise --m.
    #[arg(long, env = "SUBSEQ_DTW_SERIES")]
    pub series: Option<PathBuf>,
    #[arg(long, env = "SUBSEQ_DTW_FORMAT", value_parser = parse_format)]
    pub format: Option<SeriesFormat>,
    #[arg(long, env = "SUBSEQ_DTW_M", default_value_t = 100_000)]
    pub m: usize,
    #[arg(long, env = "SUBSEQ_DTW_N", default_value_t = 128)]
    pub n: usize,
    #[arg(long, env = "SUBSEQ_DTW_FRAGMENTS", default_value_t = 1)]
    pub fragments: usize,
}

#[derive(Debug, Clone, Args)]
pub struct WorkerArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub tuning: TuningArgs,
    /// Coordinator to join.
    #[arg(long, env = "SUBSEQ_DTW_COORDINATOR")]
    pub coordinator: String,
    /// Total number of fragments (= workers) in the cluster.
    #[arg(long, env = "SUBSEQ_DTW_FRAGMENTS")]
    pub fragments: usize,
    /// 0-based fragment this worker owns.
    #[arg(long, env = "SUBSEQ_DTW_WORKER")]
    pub worker: usize,
    #[arg(long, env = "SUBSEQ_DTW_ROUNDS_PER_REDUCTION", default_value_t = 1)]
    pub rounds_per_reduction: u32,
    #[arg(long, env = "SUBSEQ_DTW_TIMEOUT", default_value_t = 30.0)]
    pub timeout: f64,
    #[arg(long, env = "SUBSEQ_DTW_OUTPUT", value_enum, default_value_t = OutputKind::Human)]
    pub output: OutputKind,
}

#[derive(Debug, Clone, Args)]
pub struct CoordinateArgs {
    #[arg(long, env = "SUBSEQ_DTW_COORDINATOR", default_value = "127.0.0.1:7070")]
    pub coordinator: SocketAddr,
    /// Number of workers to wait for.
    #[arg(long, env = "SUBSEQ_DTW_FRAGMENTS")]
    pub fragments: usize,
    #[arg(long, env = "SUBSEQ_DTW_TIMEOUT", default_value_t = 30.0)]
    pub timeout: f64,
    #[arg(long, env = "SUBSEQ_DTW_OUTPUT", value_enum, default_value_t = OutputKind::Human)]
    pub output: OutputKind,
}
