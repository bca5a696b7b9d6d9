// SPDX-License-Identifier: MIT OR Apache-2.0

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use seglens_core::search::{DEFAULT_BETA, DEFAULT_WINDOW};
use seglens_core::{Algorithm, EmbeddingMethod, DEFAULT_VAR_FLOOR};

/// Temporal segmentation of per-frame feature sequences.
#[derive(Debug, Parser)]
#[command(name = "seglens", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Project a feature CSV to a single-column embedding CSV.
    Embed(EmbedCmd),
    /// Search change points on an embedding CSV.
    Detect(DetectCmd),
    /// Score a segmentation JSON against per-frame labels.
    Evaluate(EvaluateCmd),
    /// Trace a ROC curve by sweeping the PELT penalty.
    Sweep(SweepCmd),
    /// Write a synthetic feature matrix with known transitions.
    Synth(SynthCmd),
    /// Embed, detect and optionally evaluate in one go.
    Pipeline(PipelineCmd),
}

#[derive(Debug, Args)]
pub struct EmbedOpts {
    /// Embedding method.
    #[arg(long, default_value = "pca", value_parser = parse_method)]
    pub embedding: EmbeddingMethod,
    /// RBF kernel width; defaults to the median heuristic.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// The first CSV column holds integer frame ids.
    #[arg(long)]
    pub has_frame_ids: bool,
    /// Allow kernel embeddings above 20,000 frames.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args)]
pub struct SearchOpts {
    #[arg(long, default_value = "pelt", value_parser = parse_algorithm)]
    pub algorithm: Algorithm,
    /// Penalty per change point.
    #[arg(long, default_value_t = DEFAULT_BETA)]
    pub beta: f64,
    /// Number of change points for `--algorithm dpk`.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub min_len: usize,
    /// Half-width of the windows for `--algorithm window`.
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    pub window: usize,
    #[arg(long, default_value_t = DEFAULT_VAR_FLOOR)]
    pub var_floor: f64,
}

#[derive(Debug, Args)]
pub struct EmbedCmd {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[command(flatten)]
    pub embed: EmbedOpts,
}

#[derive(Debug, Args)]
pub struct DetectCmd {
    /// Single-column embedding CSV.
    #[arg(long)]
    pub input: PathBuf,
    /// Segmentation JSON to write.
    #[arg(long)]
    pub output: PathBuf,
    /// Embedding name recorded in the output.
    #[arg(long, default_value = "pca", value_parser = parse_method)]
    pub embedding: EmbeddingMethod,
    #[command(flatten)]
    pub search: SearchOpts,
    /// Leave the creation time out of the output.
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Debug, Args)]
pub struct EvaluateCmd {
    /// Segmentation JSON.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub labels: PathBuf,
    /// Report JSON to write; printed to stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Frames a detection may sit away from a true transition.
    #[arg(long, default_value_t = 0)]
    pub tolerance: usize,
}

#[derive(Debug, Args)]
pub struct SweepCmd {
    /// Feature CSV.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub labels: PathBuf,
    /// ROC table CSV to write.
    #[arg(long)]
    pub output: PathBuf,
    /// Report JSON to write.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Comma-separated penalties; defaults to 20 log-spaced values in [1, 1000].
    #[arg(long, value_delimiter = ',')]
    pub betas: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0)]
    pub tolerance: usize,
    #[arg(long, default_value_t = 1)]
    pub min_len: usize,
    #[arg(long, default_value_t = DEFAULT_VAR_FLOOR)]
    pub var_floor: f64,
    #[command(flatten)]
    pub embed: EmbedOpts,
}

#[derive(Debug, Args)]
pub struct SynthCmd {
    /// Directory receiving features.csv, labels.csv and truth.json.
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 2000)]
    pub frames: usize,
    #[arg(long, default_value_t = 64)]
    pub dims: usize,
    /// Number of abnormal runs.
    #[arg(long, default_value_t = 8)]
    pub runs: usize,
    /// Mean shift applied inside runs.
    #[arg(long, default_value_t = 3.0)]
    pub shift: f64,
}

#[derive(Debug, Args)]
pub struct PipelineCmd {
    /// Feature CSV.
    #[arg(long)]
    pub input: PathBuf,
    /// Per-frame labels; enables the evaluation report.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// Segmentation JSON to write.
    #[arg(long)]
    pub output: PathBuf,
    /// Report JSON path; defaults to the output path with `.eval.json`.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub tolerance: usize,
    #[command(flatten)]
    pub embed: EmbedOpts,
    #[command(flatten)]
    pub search: SearchOpts,
    #[arg(long)]
    pub no_timestamp: bool,
}

fn parse_method(s: &str) -> Result<EmbeddingMethod, String> {
    s.parse().map_err(|e: seglens_core::Error| e.to_string())
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: seglens_core::Error| e.to_string())
}
