//! The `cdi` command line: extract, compile, solve, diagnose, render.
//!
//! Exit codes: 0 success, 1 usage or validation, 2 parse or data, 3
//! provider or network.

mod commands;
mod manifest;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{cmd_compile, cmd_diagnose, cmd_extract, cmd_render, cmd_solve, read_propositions};
pub use manifest::RunManifest;

use crate::error::Error;
use crate::llm::FixtureMode;

#[derive(Debug, Parser)]
#[command(name = "cdi", version, about = "Coherence-driven inference over propositions")]
pub struct Cli {
    /// Log prompts, responses, and progress to stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract a labeled proposition list from a transcript.
    Extract(ExtractArgs),
    /// Sample N graphs for a proposition list and write their median.
    Compile(CompileArgs),
    /// Find the most coherent bipartition of a graph.
    Solve(SolveArgs),
    /// Subsampling convergence diagnostic for an ensemble directory.
    Diagnose(DiagnoseArgs),
    /// Write a graph, optionally with a cut, as Graphviz DOT.
    Render(RenderArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ProviderArgs {
    #[arg(long, default_value = "o3-mini")]
    pub model: String,
    /// off, record, or replay.
    #[arg(long = "fixtures", default_value = "off")]
    pub fixture_mode: FixtureMode,
    /// Where fixtures are read (replay) or written (record).
    #[arg(long)]
    pub fixture_dir: Option<PathBuf>,
    /// Chat-completion base URL; defaults to $OPENAI_BASE_URL.
    #[arg(long)]
    pub base_url: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct ExtractArgs {
    pub transcript: PathBuf,
    #[command(flatten)]
    pub provider: ProviderArgs,
    /// Ask for this many propositions.
    #[arg(long)]
    pub count: Option<usize>,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CompileArgs {
    pub propositions: PathBuf,
    #[command(flatten)]
    pub provider: ProviderArgs,
    #[arg(long, default_value_t = crate::llm::DEFAULT_SAMPLES)]
    pub samples: usize,
    /// Forwarded to the endpoint as its `seed` option.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Forwarded to the endpoint as its `temperature` option.
    #[arg(long)]
    pub temperature: Option<f64>,
    #[arg(long, default_value_t = 2)]
    pub max_retries: usize,
    #[arg(long, default_value_t = 4)]
    pub parallelism: usize,
    /// Run directory.
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    pub graph: PathBuf,
    /// Force exhaustive enumeration.
    #[arg(long, conflicts_with = "heuristic")]
    pub exact: bool,
    /// Force local search.
    #[arg(long)]
    pub heuristic: bool,
    /// Comma-separated ids to pin to the accepted side. Defaults to the
    /// graph's privileged propositions.
    #[arg(long, value_delimiter = ',')]
    pub priority: Option<Vec<String>>,
    /// Also report the Gibbs distribution at this inverse temperature.
    #[arg(long)]
    pub gibbs: Option<f64>,
    /// Snap weights to {-1, -0.5, 0, 0.5, 1} first.
    #[arg(long)]
    pub quantize: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 50)]
    pub restarts: usize,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DiagnoseArgs {
    /// A compile run directory or a directory of graph JSON files.
    pub ensemble_dir: PathBuf,
    #[arg(long, default_value_t = crate::ensemble::DEFAULT_SUBSAMPLE_CAP)]
    pub cap: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory for convergence.json and convergence.csv; defaults to
    /// the ensemble directory.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RenderArgs {
    pub graph: PathBuf,
    /// A solve output or bare cut report whose cut is drawn.
    #[arg(long)]
    pub cut_from: Option<PathBuf>,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

/// Maps an error to the process exit code.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidId { .. }
        | Error::InvalidPartition(_)
        | Error::UnknownVertex(_)
        | Error::InvalidParameter(_)
        | Error::TooLarge { .. }
        | Error::InsufficientSamples(_)
        | Error::Io { .. } => 1,
        Error::InvalidGraph(_)
        | Error::InvalidRating(_)
        | Error::Schema { .. }
        | Error::Ensemble(_)
        | Error::UnparseableResponse
        | Error::MalformedEdgeList { .. }
        | Error::Vocabulary(_)
        | Error::Extraction { .. }
        | Error::Fixture { .. }
        | Error::Json(_) => 2,
        Error::PipelineFailure { provider_only, .. } => {
            if *provider_only {
                3
            } else {
                2
            }
        }
        Error::Provider(_) => 3,
    }
}

/// Parses `args` (program name first) and runs the command, writing
/// results to `stdout` and messages to `stderr`. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    if cli.verbose {
        let _ = env_logger::Builder::from_default_env()
            .filter_module("cdi", log::LevelFilter::Debug)
            .try_init();
    }
    let result = match &cli.command {
        Command::Extract(a) => cmd_extract(a, stdout),
        Command::Compile(a) => cmd_compile(a, stderr),
        Command::Solve(a) => cmd_solve(a, stdout, stderr),
        Command::Diagnose(a) => cmd_diagnose(a, stderr),
        Command::Render(a) => cmd_render(a, stdout),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}
