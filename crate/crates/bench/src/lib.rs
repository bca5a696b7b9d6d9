// SPDX-License-Identifier: MIT OR Apache-2.0

//! Shared fixtures for the benchmarks.

use seglens_core::synth::{gen_feature_matrix, gen_piecewise_gaussian, spaced_runs, SegmentSpec};
use seglens_core::{Embedding1D, FeatureMatrix};

/// `segments` equal-length Gaussian stretches with alternating levels.
pub fn step_signal(seed: u64, len: usize, segments: usize) -> Embedding1D {
    let base = len / segments;
    let specs: Vec<SegmentSpec> = (0..segments)
        .map(|i| {
            let length = if i + 1 == segments { len - base * (segments - 1) } else { base };
            let mean = if i % 2 == 0 { 0.0 } else { 4.0 };
            SegmentSpec::new(length, mean, 1.0 + 0.25 * (i % 3) as f64)
        })
        .collect();
    gen_piecewise_gaussian(seed, &specs).expect("valid specs").0
}

/// Synthetic feature matrix with `runs` shifted stretches.
pub fn feature_matrix(seed: u64, len: usize, dim: usize, runs: usize) -> FeatureMatrix {
    let runs = spaced_runs(seed, len, runs).expect("runs fit");
    gen_feature_matrix(seed, len, dim, &runs, 3.0).expect("valid parameters").0
}
