// SPDX-License-Identifier: MIT OR Apache-2.0

//! Scoring detected boundaries against label-derived transitions.
//!
//! Every frame gap `t` in `1..T` is a candidate slot; it is a positive when
//! the class changes between frames `t - 1` and `t`. Rates use
//! `|truth|` positives and `(T - 1) - |truth|` negatives. The ROC curve is
//! traced by sweeping the penalty of the PELT detector.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cost::GaussianCost;
use crate::error::{Error, Result};
use crate::search::{pelt, SearchParams};
use crate::signal::{round_sig, write_json, LabelSequence, Segmentation};

/// Sorted, unique, interior transition indices of one sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionTruth {
    pub transitions: Vec<usize>,
    /// Sequence length `T`.
    pub len: usize,
}

impl TransitionTruth {
    pub fn new(mut transitions: Vec<usize>, len: usize) -> Result<Self> {
        transitions.sort_unstable();
        transitions.dedup();
        if let Some(&bad) = transitions.iter().find(|&&t| t == 0 || t >= len) {
            return Err(Error::InvalidParameter(format!(
                "transition {bad} is outside 1..{len}"
            )));
        }
        Ok(Self { transitions, len })
    }

    /// Negative slots: frame gaps that are not transitions.
    pub fn negatives(&self) -> usize {
        self.len.saturating_sub(1) - self.transitions.len()
    }
}

/// Indices where consecutive classes differ.
pub fn transitions_from_labels(labels: &LabelSequence) -> TransitionTruth {
    let transitions = labels
        .classes
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] != w[1])
        .map(|(i, _)| i + 1)
        .collect();
    TransitionTruth {
        transitions,
        len: labels.len(),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MatchCounts {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    /// `(predicted, truth)` pairs, in the order they were matched.
    pub pairs: Vec<(usize, usize)>,
}

/// One-to-one matching within `tolerance` frames.
///
/// Candidate pairs are taken greedily by increasing distance; ties go to
/// the lower predicted index, then the lower true index. With
/// `tolerance = 0` this is plain set intersection.
pub fn match_boundaries(predicted: &[usize], truth: &[usize], tolerance: usize) -> MatchCounts {
    let mut candidates: Vec<(usize, usize, usize)> = Vec::new();
    for (pi, &p) in predicted.iter().enumerate() {
        let lo = truth.partition_point(|&t| t + tolerance < p);
        for (ti, &t) in truth.iter().enumerate().skip(lo) {
            if t > p + tolerance {
                break;
            }
            candidates.push((p.abs_diff(t), pi, ti));
        }
    }
    candidates.sort_unstable_by_key(|&(d, pi, ti)| (d, predicted[pi], truth[ti]));

    let mut used_p = vec![false; predicted.len()];
    let mut used_t = vec![false; truth.len()];
    let mut pairs = Vec::new();
    for (_, pi, ti) in candidates {
        if !used_p[pi] && !used_t[ti] {
            used_p[pi] = true;
            used_t[ti] = true;
            pairs.push((predicted[pi], truth[ti]));
        }
    }
    MatchCounts {
        tp: pairs.len(),
        fp: predicted.len() - pairs.len(),
        fn_: truth.len() - pairs.len(),
        pairs,
    }
}

/// Scores one segmentation against one truth.
pub fn score(predicted: &Segmentation, truth: &TransitionTruth, tolerance: usize) -> RocRow {
    let counts = match_boundaries(&predicted.changepoints, &truth.transitions, tolerance);
    RocRow::from_counts(predicted.beta, counts.tp, counts.fp, counts.fn_, truth.negatives())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RocRow {
    pub beta: f64,
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tpr: f64,
    pub fpr: f64,
}

impl RocRow {
    pub fn from_counts(beta: f64, tp: usize, fp: usize, fn_: usize, negatives: usize) -> Self {
        let positives = tp + fn_;
        let tpr = if positives == 0 { 0.0 } else { tp as f64 / positives as f64 };
        let fpr = if negatives == 0 {
            0.0
        } else {
            (fp as f64 / negatives as f64).min(1.0)
        };
        Self { beta, tp, fp, fn_, tpr, fpr }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    /// One row per penalty, in grid order.
    pub rows: Vec<RocRow>,
    /// `(fpr, tpr)` points sorted by fpr then tpr, with both anchors.
    pub roc_points: Vec<(f64, f64)>,
    pub auc: f64,
    /// Penalty maximizing `tpr - fpr`; the smallest such penalty on ties.
    pub best_beta: f64,
    pub tolerance: usize,
}

impl EvalReport {
    /// Assembles a report from per-penalty rows.
    pub fn from_rows(rows: Vec<RocRow>, tolerance: usize) -> Self {
        let mut roc_points: Vec<(f64, f64)> = std::iter::once((0.0, 0.0))
            .chain(rows.iter().map(|r| (r.fpr, r.tpr)))
            .chain(std::iter::once((1.0, 1.0)))
            .collect();
        roc_points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let auc = roc_points
            .windows(2)
            .map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / 2.0)
            .sum::<f64>()
            .clamp(0.0, 1.0);

        let mut best: Option<(f64, f64)> = None;
        for r in &rows {
            let j = r.tpr - r.fpr;
            let better = match best {
                None => true,
                Some((bj, bb)) => j > bj || (j == bj && r.beta < bb),
            };
            if better {
                best = Some((j, r.beta));
            }
        }

        Self {
            rows,
            roc_points,
            auc,
            best_beta: best.map_or(f64::NAN, |(_, b)| b),
            tolerance,
        }
    }

    /// Writes the per-penalty table as CSV.
    pub fn write_roc_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "beta,tp,fp,fn,tpr,fpr")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                round_sig(r.beta),
                r.tp,
                r.fp,
                r.fn_,
                round_sig(r.tpr),
                round_sig(r.fpr)
            )?;
        }
        Ok(())
    }

    pub fn summary(&self) -> ReportSummary {
        ReportSummary {
            auc: round_sig(self.auc),
            best_beta: round_sig(self.best_beta),
            tolerance: self.tolerance,
            rows: self
                .rows
                .iter()
                .map(|r| RocRow {
                    beta: round_sig(r.beta),
                    tpr: round_sig(r.tpr),
                    fpr: round_sig(r.fpr),
                    ..*r
                })
                .collect(),
            roc_points: self
                .roc_points
                .iter()
                .map(|&(f, t)| (round_sig(f), round_sig(t)))
                .collect(),
        }
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        write_json(path, &self.summary())
    }
}

/// JSON form of an [`EvalReport`], with numbers at 12 significant digits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub auc: f64,
    pub best_beta: f64,
    pub tolerance: usize,
    pub rows: Vec<RocRow>,
    pub roc_points: Vec<(f64, f64)>,
}

/// Runs PELT at every penalty in `betas` and traces the ROC curve.
pub fn roc_sweep(
    model: &GaussianCost,
    truth: &TransitionTruth,
    betas: &[f64],
    tolerance: usize,
    min_len: usize,
) -> Result<EvalReport> {
    roc_sweep_pooled(&[(model, truth)], betas, tolerance, min_len)
}

/// ROC sweep over several sequences. Counts are pooled across sequences at
/// each penalty before rates are computed.
pub fn roc_sweep_pooled(
    videos: &[(&GaussianCost, &TransitionTruth)],
    betas: &[f64],
    tolerance: usize,
    min_len: usize,
) -> Result<EvalReport> {
    if betas.is_empty() {
        return Err(Error::InvalidParameter("the penalty grid is empty".into()));
    }
    if let Some(b) = betas.iter().find(|&&b| !(b > 0.0 && b.is_finite())) {
        return Err(Error::InvalidParameter(format!("penalties must be positive, got {b}")));
    }
    for (model, truth) in videos {
        if model.len() != truth.len {
            return Err(Error::LengthMismatch {
                expected: model.len(),
                found: truth.len,
            });
        }
    }
    let negatives: usize = videos.iter().map(|(_, t)| t.negatives()).sum();

    let rows = betas
        .par_iter()
        .map(|&beta| {
            let params = SearchParams::with_beta(beta).min_len(min_len);
            let (mut tp, mut fp, mut fn_) = (0, 0, 0);
            for (model, truth) in videos {
                let seg = pelt(model, &params)?;
                let m = match_boundaries(&seg.changepoints, &truth.transitions, tolerance);
                tp += m.tp;
                fp += m.fp;
                fn_ += m.fn_;
            }
            Ok(RocRow::from_counts(beta, tp, fp, fn_, negatives))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EvalReport::from_rows(rows, tolerance))
}

/// `count` penalties spaced evenly in log scale over `[low, high]`.
pub fn log_grid(low: f64, high: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![low],
        _ => {
            let (a, b) = (low.ln(), high.ln());
            (0..count)
                .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
                .collect()
        }
    }
}
