// SPDX-License-Identifier: MIT OR Apache-2.0

//! Seeded generators of signals and feature matrices with known transitions.
//!
//! Randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded through
//! `SeedableRng::seed_from_u64`, whose output stream is fixed by the
//! ChaCha stream cipher and stable across platforms. Uniform draws take the
//! top 53 bits of each 64-bit output, `u = (x >> 11) * 2^-53`. Normal draws
//! use the Box-Muller transform on consecutive uniform pairs `(u1, u2)`,
//!
//! ```text
//! r = sqrt(-2 ln(1 - u1)),  z0 = r cos(2 pi u2),  z1 = r sin(2 pi u2)
//! ```
//!
//! emitting `z0` then `z1`.

use std::f64::consts::TAU;
use std::path::Path;

use nalgebra::DMatrix;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::TransitionTruth;
use crate::signal::{write_json, Embedding1D, FeatureMatrix, LabelSequence};

/// Seeded source of uniform and standard normal draws.
#[derive(Clone, Debug)]
pub struct SignalRng {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl SignalRng {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform on `[0, 1)` with 53 bits of resolution.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        ((self.uniform() * n as f64) as usize).min(n.saturating_sub(1))
    }

    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * (1.0 - u1).ln()).sqrt();
        let (s, c) = (TAU * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }
}

/// One constant-parameter stretch of a piecewise Gaussian signal.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentSpec {
    pub length: usize,
    pub mean: f64,
    pub std: f64,
}

impl SegmentSpec {
    pub fn new(length: usize, mean: f64, std: f64) -> Self {
        Self { length, mean, std }
    }
}

/// Concatenates Gaussian draws for each spec. The truth holds the start of
/// every spec after the first.
pub fn gen_piecewise_gaussian(seed: u64, specs: &[SegmentSpec]) -> Result<(Embedding1D, TransitionTruth)> {
    if specs.is_empty() {
        return Err(Error::InvalidParameter("at least one segment spec is required".into()));
    }
    for s in specs {
        if s.length == 0 || !(s.std >= 0.0 && s.std.is_finite()) || !s.mean.is_finite() {
            return Err(Error::InvalidParameter(format!("invalid segment spec {s:?}")));
        }
    }
    let mut rng = SignalRng::new(seed);
    let mut values = Vec::with_capacity(specs.iter().map(|s| s.length).sum());
    let mut transitions = Vec::with_capacity(specs.len() - 1);
    for (i, spec) in specs.iter().enumerate() {
        if i > 0 {
            transitions.push(values.len());
        }
        for _ in 0..spec.length {
            values.push(spec.mean + spec.std * rng.normal());
        }
    }
    let len = values.len();
    let source = format!("synthetic(seed={seed})");
    Ok((Embedding1D::new(values, source)?, TransitionTruth { transitions, len }))
}

/// A half-open abnormal stretch `[start, end)` of frames.
pub type Run = (usize, usize);

/// Places `count` disjoint runs, one inside each of `count` equal slots of
/// `0..len`, with random length between a quarter and a half of the slot and
/// a margin of at least one frame on each side.
pub fn spaced_runs(seed: u64, len: usize, count: usize) -> Result<Vec<Run>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let slot = len / count;
    if slot < 8 {
        return Err(Error::Infeasible(format!(
            "{count} runs do not fit in {len} frames (need 8 frames per run)"
        )));
    }
    let mut rng = SignalRng::new(seed ^ 0x005E_ED0F_0A11);
    let margin = (slot / 8).max(1);
    Ok((0..count)
        .map(|i| {
            let length = slot / 4 + rng.below(slot / 4 + 1);
            let lo = i * slot + margin;
            let hi = (i + 1) * slot - margin - length;
            let start = lo + rng.below(hi - lo + 1);
            (start, start + length)
        })
        .collect())
}

/// Baseline rows are i.i.d. standard normal in `p` dimensions; rows inside a
/// run are shifted by `shift * u`, where `u` is a unit vector drawn once
/// from the seed before any row. Labels are 1 inside runs and 0 elsewhere.
pub fn gen_feature_matrix(
    seed: u64,
    len: usize,
    dim: usize,
    runs: &[Run],
    shift: f64,
) -> Result<(FeatureMatrix, LabelSequence)> {
    if dim < 2 {
        return Err(Error::InvalidParameter(format!("feature width must be >= 2, got {dim}")));
    }
    if len == 0 {
        return Err(Error::InvalidParameter("frame count must be >= 1".into()));
    }
    if !shift.is_finite() {
        return Err(Error::InvalidParameter(format!("shift must be finite, got {shift}")));
    }
    let mut sorted = runs.to_vec();
    sorted.sort_unstable();
    for &(start, end) in &sorted {
        if start >= end || end > len {
            return Err(Error::InvalidParameter(format!(
                "run [{start}, {end}) is empty or outside 0..{len}"
            )));
        }
    }
    if let Some(w) = sorted.windows(2).find(|w| w[1].0 < w[0].1) {
        return Err(Error::InvalidParameter(format!(
            "runs [{}, {}) and [{}, {}) overlap",
            w[0].0, w[0].1, w[1].0, w[1].1
        )));
    }

    let mut rng = SignalRng::new(seed);
    let mut direction: Vec<f64> = (0..dim).map(|_| rng.normal()).collect();
    let norm = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
    direction.iter_mut().for_each(|v| *v /= norm);

    let mut classes = vec![0u32; len];
    for &(start, end) in &sorted {
        classes[start..end].fill(1);
    }
    let mut flat = Vec::with_capacity(len * dim);
    for &class in &classes {
        let offset = if class == 1 { shift } else { 0.0 };
        for &u in &direction {
            flat.push(rng.normal() + offset * u);
        }
    }
    let matrix = FeatureMatrix::new(DMatrix::from_row_slice(len, dim, &flat), None)?;
    Ok((matrix, LabelSequence::new(classes)))
}

/// Truth file written next to a synthetic feature matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthTruth {
    pub seed: u64,
    pub frames: usize,
    pub dims: usize,
    pub shift: f64,
    pub runs: Vec<Run>,
    pub transitions: Vec<usize>,
}

impl SynthTruth {
    pub fn write(&self, path: &Path) -> Result<()> {
        write_json(path, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::pca_embed;
    use crate::eval::{match_boundaries, transitions_from_labels};
    use crate::search::{opt_partition, pelt, SearchParams};
    use crate::GaussianCost;

    #[test]
    fn single_spec_has_no_transitions() {
        let (e, t) = gen_piecewise_gaussian(1, &[SegmentSpec::new(100, 0.0, 1.0)]).unwrap();
        assert_eq!(e.len(), 100);
        assert!(t.transitions.is_empty());
    }

    #[test]
    fn zero_std_gives_exact_steps() {
        let (e, t) = gen_piecewise_gaussian(3, &[SegmentSpec::new(50, 0.0, 0.0), SegmentSpec::new(50, 7.0, 0.0)]).unwrap();
        assert!(e.values()[..50].iter().all(|&v| v == 0.0));
        assert!(e.values()[50..].iter().all(|&v| v == 7.0));
        assert_eq!(t.transitions, vec![50]);
    }

    #[test]
    fn same_seed_same_bits() {
        let specs = [SegmentSpec::new(40, 1.0, 2.0), SegmentSpec::new(30, -1.0, 0.5)];
        let a = gen_piecewise_gaussian(99, &specs).unwrap().0;
        let b = gen_piecewise_gaussian(99, &specs).unwrap().0;
        let c = gen_piecewise_gaussian(100, &specs).unwrap().0;
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn stream_is_pinned() {
        // First draws for seed 0; a change here breaks reproducibility of
        // every stored fixture.
        let mut rng = SignalRng::new(0);
        let u: Vec<f64> = (0..3).map(|_| rng.uniform()).collect();
        let mut again = SignalRng::new(0);
        assert_eq!(u, (0..3).map(|_| again.uniform()).collect::<Vec<_>>());
        assert!(u.iter().all(|v| (0.0..1.0).contains(v)));
        assert_eq!(u, [0.709_075_415_426_561_8, 0.465_921_722_289_610_15, 0.699_143_242_674_731_7]);
    }

    #[test]
    fn normal_moments() {
        let mut rng = SignalRng::new(7);
        let z: Vec<f64> = (0..20_000).map(|_| rng.normal()).collect();
        let mean = z.iter().sum::<f64>() / z.len() as f64;
        let var = z.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / z.len() as f64;
        assert!(mean.abs() < 0.03, "{mean}");
        assert!((var - 1.0).abs() < 0.05, "{var}");
    }

    #[test]
    fn step_is_recovered() {
        let (e, t) = gen_piecewise_gaussian(11, &[SegmentSpec::new(100, 0.0, 1.0), SegmentSpec::new(100, 5.0, 1.0)]).unwrap();
        let m = GaussianCost::new(&e);
        let params = SearchParams::with_beta(20.0);
        let exact = opt_partition(&m, &params).unwrap();
        let seg = pelt(&m, &params).unwrap();
        assert_eq!(seg.changepoints, exact.changepoints);
        let hits = match_boundaries(&seg.changepoints, &t.transitions, 2);
        assert_eq!(hits.tp, 1, "{:?}", seg.changepoints);
    }

    #[test]
    fn runs_rejected_when_overlapping() {
        let err = gen_feature_matrix(1, 100, 4, &[(10, 30), (25, 40)], 1.0).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter(_)));
        assert!(gen_feature_matrix(1, 100, 4, &[(90, 101)], 1.0).is_err());
        assert!(gen_feature_matrix(1, 100, 1, &[], 1.0).is_err());
        assert!(gen_feature_matrix(1, 100, 4, &[(10, 30), (30, 40)], 1.0).is_ok());
    }

    #[test]
    fn no_runs_no_transitions() {
        let (x, labels) = gen_feature_matrix(5, 50, 3, &[], 4.0).unwrap();
        assert_eq!((x.len(), x.dim()), (50, 3));
        assert!(labels.classes.iter().all(|&c| c == 0));
        assert!(transitions_from_labels(&labels).transitions.is_empty());
    }

    #[test]
    fn one_run_recovered_end_to_end() {
        let (x, labels) = gen_feature_matrix(2024, 300, 64, &[(100, 150)], 5.0).unwrap();
        let truth = transitions_from_labels(&labels);
        assert_eq!(truth.transitions, vec![100, 150]);
        let (e, _) = pca_embed(&x).unwrap();
        let m = GaussianCost::new(&e);
        let params = SearchParams::with_beta(50.0);
        let seg = pelt(&m, &params).unwrap();
        assert_eq!(seg.changepoints, opt_partition(&m, &params).unwrap().changepoints);
        let hits = match_boundaries(&seg.changepoints, &truth.transitions, 2);
        assert_eq!(hits.tp, 2, "{:?}", seg.changepoints);
    }

    #[test]
    fn spaced_runs_are_disjoint_and_interior() {
        let runs = spaced_runs(3, 2000, 8).unwrap();
        assert_eq!(runs.len(), 8);
        assert!(runs[0].0 >= 1 && runs[7].1 < 2000);
        assert!(runs.windows(2).all(|w| w[0].1 < w[1].0));
        let (_, labels) = gen_feature_matrix(3, 2000, 4, &runs, 1.0).unwrap();
        let expected: Vec<usize> = runs.iter().flat_map(|&(s, e)| [s, e]).collect();
        assert_eq!(transitions_from_labels(&labels).transitions, expected);
        assert!(spaced_runs(3, 20, 8).is_err());
    }
}
