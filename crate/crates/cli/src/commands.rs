// SPDX-License-Identifier: MIT OR Apache-2.0

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use seglens_core::embedding::embed as project;
use seglens_core::eval::{log_grid, roc_sweep, score, transitions_from_labels, EvalReport};
use seglens_core::search::detect as search;
use seglens_core::signal::{
    load_embedding, load_feature_matrix, load_labels, read_labels, write_embedding,
    write_feature_matrix, write_labels,
};
use seglens_core::synth::{gen_feature_matrix, spaced_runs, SynthTruth};
use seglens_core::{
    Embedding1D, EmbeddingConfig, Error, FeatureMatrix, GaussianCost, SearchParams, Segmentation,
    SegmentationRecord,
};

use crate::args::{
    DetectCmd, EmbedCmd, EmbedOpts, EvaluateCmd, PipelineCmd, SearchOpts, SweepCmd, SynthCmd,
};

/// Kernel embeddings materialize a `T x T` matrix; above this they need `--force`.
const KERNEL_FRAME_LIMIT: usize = 20_000;
const THREADS_VAR: &str = "SEGLENS_THREADS";

fn embed_features(x: &FeatureMatrix, opts: &EmbedOpts) -> Result<Embedding1D> {
    if opts.embedding.is_kernel() && x.len() > KERNEL_FRAME_LIMIT && !opts.force {
        return Err(Error::Infeasible(format!(
            "{} needs a {n}x{n} kernel matrix; pass --force to allow more than {KERNEL_FRAME_LIMIT} frames",
            opts.embedding,
            n = x.len()
        ))
        .into());
    }
    let cfg = EmbeddingConfig {
        method: opts.embedding,
        gamma: opts.gamma,
    };
    let embedding = project(x, &cfg)?;
    if embedding.is_degenerate() {
        return Err(Error::ZeroVariance(format!(
            "the {} embedding is identically zero",
            opts.embedding
        ))
        .into());
    }
    Ok(embedding)
}

fn load_features(path: &Path, opts: &EmbedOpts) -> Result<FeatureMatrix> {
    load_feature_matrix(path, opts.has_frame_ids)
        .with_context(|| format!("loading features from {}", path.display()))
}

fn search_params(opts: &SearchOpts) -> SearchParams {
    SearchParams {
        beta: opts.beta,
        min_len: opts.min_len,
        max_changepoints: opts.k,
        window_width: opts.window,
    }
}

fn run_search(embedding: &Embedding1D, opts: &SearchOpts) -> Result<Segmentation> {
    let model = GaussianCost::with_var_floor(embedding, opts.var_floor)?;
    let params = search_params(opts);
    warn_degenerate_penalty(params.beta, params.min_len, opts.var_floor);
    Ok(search(&model, opts.algorithm, &params)?)
}

/// Single-sample segments cost `ln(var_floor)` per point, so small
/// penalties can make isolating every sample look worthwhile.
fn warn_degenerate_penalty(beta: f64, min_len: usize, var_floor: f64) {
    let threshold = var_floor.ln().abs();
    if min_len == 1 && beta < threshold {
        eprintln!(
            "warning: beta {beta} is below |ln var_floor| = {threshold:.4} with min-len 1; \
             single-sample segments may be favoured (raise --beta or --min-len)"
        );
    }
}

fn write_segmentation(
    seg: &Segmentation,
    embedding: &str,
    path: &Path,
    no_timestamp: bool,
) -> Result<()> {
    let mut record: SegmentationRecord = seg.to_record(embedding);
    if !no_timestamp {
        record.created_unix = Some(
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or_default(),
        );
    }
    record
        .write(path)
        .with_context(|| format!("writing {}", path.display()))
}

pub fn embed(cmd: &EmbedCmd) -> Result<()> {
    let x = load_features(&cmd.input, &cmd.embed)?;
    let embedding = embed_features(&x, &cmd.embed)?;
    write_embedding(&cmd.output, &embedding)?;
    Ok(())
}

pub fn detect(cmd: &DetectCmd) -> Result<()> {
    let embedding = load_embedding(&cmd.input)
        .with_context(|| format!("loading embedding from {}", cmd.input.display()))?;
    let seg = run_search(&embedding, &cmd.search)?;
    write_segmentation(&seg, cmd.embedding.name(), &cmd.output, cmd.no_timestamp)
}

pub fn evaluate(cmd: &EvaluateCmd) -> Result<()> {
    let record = SegmentationRecord::load(&cmd.input)
        .with_context(|| format!("loading segmentation from {}", cmd.input.display()))?;
    let file = File::open(&cmd.labels).map_err(|source| Error::Io {
        path: cmd.labels.clone(),
        source,
    })?;
    let labels = read_labels(std::io::BufReader::new(file))?;
    let len = labels.len();
    if let Some(&bad) = record.changepoints.iter().find(|&&c| c == 0 || c >= len) {
        return Err(Error::Schema {
            line: 1,
            message: format!("changepoint {bad} is outside 1..{len}"),
        }
        .into());
    }
    let seg = Segmentation {
        changepoints: record.changepoints,
        total_cost: record.total_cost,
        beta: record.beta,
        algorithm: record.algorithm,
        len,
    };
    let truth = transitions_from_labels(&labels);
    let report = EvalReport::from_rows(vec![score(&seg, &truth, cmd.tolerance)], cmd.tolerance);
    match &cmd.output {
        Some(path) => report.write_json(path)?,
        None => println!("{}", serde_json::to_string_pretty(&report.summary())?),
    }
    Ok(())
}

fn configure_threads() -> Result<()> {
    if let Ok(value) = std::env::var(THREADS_VAR) {
        let threads: usize = value
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::InvalidParameter(format!("{THREADS_VAR} must be a positive integer, got {value:?}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("configuring the worker pool")?;
    }
    Ok(())
}

pub fn sweep(cmd: &SweepCmd) -> Result<()> {
    configure_threads()?;
    let x = load_features(&cmd.input, &cmd.embed)?;
    let labels = load_labels(&cmd.labels, x.len())?;
    let embedding = embed_features(&x, &cmd.embed)?;
    let model = GaussianCost::with_var_floor(&embedding, cmd.var_floor)?;
    let truth = transitions_from_labels(&labels);
    let betas = cmd.betas.clone().unwrap_or_else(|| log_grid(1.0, 1000.0, 20));
    let report = roc_sweep(&model, &truth, &betas, cmd.tolerance, cmd.min_len)?;

    let mut out = create(&cmd.output)?;
    report
        .write_roc_csv(&mut out)
        .and_then(|()| out.flush())
        .with_context(|| format!("writing {}", cmd.output.display()))?;
    if let Some(path) = &cmd.report {
        report.write_json(path)?;
    }
    eprintln!("auc {:.4}, best beta {}", report.auc, report.best_beta);
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|source| {
        Error::Io {
            path: path.to_owned(),
            source,
        }
        .into()
    })
}

pub fn synth(cmd: &SynthCmd) -> Result<()> {
    fs::create_dir_all(&cmd.output).map_err(|source| Error::Io {
        path: cmd.output.clone(),
        source,
    })?;
    let runs = spaced_runs(cmd.seed, cmd.frames, cmd.runs)?;
    let (x, labels) = gen_feature_matrix(cmd.seed, cmd.frames, cmd.dims, &runs, cmd.shift)?;
    write_feature_matrix(&cmd.output.join("features.csv"), &x)?;
    write_labels(&cmd.output.join("labels.csv"), &labels)?;
    let truth = SynthTruth {
        seed: cmd.seed,
        frames: cmd.frames,
        dims: cmd.dims,
        shift: cmd.shift,
        transitions: transitions_from_labels(&labels).transitions,
        runs,
    };
    truth.write(&cmd.output.join("truth.json"))?;
    Ok(())
}

fn default_report_path(output: &Path) -> PathBuf {
    output.with_extension("eval.json")
}

pub fn pipeline(cmd: &PipelineCmd) -> Result<()> {
    let x = load_features(&cmd.input, &cmd.embed)?;
    let labels = cmd
        .labels
        .as_deref()
        .map(|path| load_labels(path, x.len()))
        .transpose()?;
    let embedding = embed_features(&x, &cmd.embed)?;
    let seg = run_search(&embedding, &cmd.search)?;
    write_segmentation(&seg, cmd.embed.embedding.name(), &cmd.output, cmd.no_timestamp)?;

    if let Some(labels) = labels {
        let truth = transitions_from_labels(&labels);
        let report = EvalReport::from_rows(vec![score(&seg, &truth, cmd.tolerance)], cmd.tolerance);
        let path = cmd
            .report
            .clone()
            .unwrap_or_else(|| default_report_path(&cmd.output));
        report.write_json(&path)?;
    }
    Ok(())
}
