use std::net::SocketAddr;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "hybridlink",
    version,
    about = "Entity linking and benchmarking for parliamentary proceedings"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the linkers over a corpus and write one annotation file per system.
    Link(LinkArgs),
    /// Build and score the benchmark.
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Serve pooled phrases to annotators and record their decisions.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct LinkArgs {
    /// Corpus as JSON Lines, one debate per line.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Knowledge base as JSON Lines.
    #[arg(long)]
    pub kb: PathBuf,
    /// Alias dictionary (TSV: alias, uri, optional case policy). Built from the KB when omitted.
    #[arg(long)]
    pub dict: Option<PathBuf>,
    /// Address pattern configuration (JSON). Dutch defaults when omitted.
    #[arg(long)]
    pub patterns: Option<PathBuf>,
    /// Mock generalist configuration (JSON). Repeatable.
    #[arg(long)]
    pub mock: Vec<PathBuf>,
    /// Annotation file produced by another system. Repeatable.
    #[arg(long)]
    pub external: Vec<PathBuf>,
    /// Only link the scenes of this sample.
    #[arg(long)]
    pub sample: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum BenchCommand {
    /// Draw a stratified sample of scenes.
    Sample(SampleArgs),
    /// Pool system annotations into phrases.
    Pool(PoolArgs),
    /// Combine pooled system output into one annotation set.
    Combine(CombineArgs),
    /// Score annotation files against gold decisions.
    Evaluate(EvaluateArgs),
    /// Summarize the composition of a sample.
    Stats(StatsArgs),
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// Portfolio to department mapping (TSV).
    #[arg(long)]
    pub portfolio_map: PathBuf,
    /// Number of scenes to draw.
    #[arg(long)]
    pub limit: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PoolArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// Annotation file, or a directory of `.jsonl` annotation files. Repeatable.
    #[arg(long, required = true)]
    pub annotations: Vec<PathBuf>,
    /// Only pool the scenes of this sample.
    #[arg(long)]
    pub sample: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    Preference,
    Voting,
}

#[derive(Debug, Args)]
pub struct CombineArgs {
    #[arg(long)]
    pub pool: PathBuf,
    #[arg(long, value_enum, default_value_t = Strategy::Preference)]
    pub strategy: Strategy,
    /// System ids, most trusted first. Required for the preference strategy.
    #[arg(long, value_delimiter = ',')]
    pub order: Vec<String>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub pool: PathBuf,
    /// Gold decision log (JSON Lines).
    #[arg(long)]
    pub gold: PathBuf,
    /// Annotation file to score; the file stem names the system. Repeatable.
    #[arg(long, required = true)]
    pub system: Vec<PathBuf>,
    /// Annotation file every system is compared to.
    #[arg(long)]
    pub baseline: Option<PathBuf>,
    /// Knowledge base, for per-kind slices.
    #[arg(long)]
    pub kb: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub sample: PathBuf,
    #[arg(long)]
    pub pool: PathBuf,
    #[arg(long)]
    pub gold: PathBuf,
    /// Knowledge base, to tell persons from organizations.
    #[arg(long)]
    pub kb: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub pool: PathBuf,
    /// Gold decision log; created if missing, appended to otherwise.
    #[arg(long)]
    pub gold: PathBuf,
    /// Knowledge base for candidate lists.
    #[arg(long)]
    pub kb: PathBuf,
    /// Sample whose scenes are marked as scenes of interest.
    #[arg(long)]
    pub sample: Option<PathBuf>,
    /// Search results offered per phrase in addition to system links.
    #[arg(long, default_value_t = 5)]
    pub candidates: usize,
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub bind: SocketAddr,
}
