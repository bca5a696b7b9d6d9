// SPDX-License-Identifier: MIT OR Apache-2.0

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::eigen::{orient, top_eigenpair};
use crate::error::{Error, Result};
use crate::signal::{Embedding1D, FeatureMatrix};

/// Leading eigenvalues at or below this are treated as zero.
const DEGENERATE_EIGENVALUE: f64 = 1e-12;
/// Rows sampled when estimating the default RBF width.
const GAMMA_SAMPLE: usize = 1_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Kernel {
    /// `x . y`; kernel PCA with it reproduces ordinary PCA.
    Linear,
    /// `x . y / (|x| |y|)`.
    Cosine,
    /// `exp(-gamma |x - y|^2)`.
    Rbf { gamma: f64 },
}

impl Kernel {
    fn eval(&self, x: &[f64], y: &[f64], norm_x: f64, norm_y: f64) -> f64 {
        match *self {
            Kernel::Linear => dot(x, y),
            Kernel::Cosine => dot(x, y) / (norm_x * norm_y),
            Kernel::Rbf { gamma } => (-gamma * squared_distance(x, y)).exp(),
        }
    }
}

/// Symmetric `T x T` kernel matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix(pub DMatrix<f64>);

impl GramMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn len(&self) -> usize {
        self.0.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.0.nrows() == 0
    }

    /// Double centering: `K - 1K/T - K1/T + 1K1/T^2`, i.e. the Gram matrix
    /// of the feature-space images after subtracting their mean.
    pub fn centered(&self) -> DMatrix<f64> {
        let k = &self.0;
        let n = k.nrows();
        let row_means: Vec<f64> = k.row_iter().map(|r| r.sum() / n as f64).collect();
        let grand = row_means.iter().sum::<f64>() / n as f64;
        DMatrix::from_fn(n, n, |i, j| k[(i, j)] - row_means[i] - row_means[j] + grand)
    }
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn squared_distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

fn rows_of(x: &FeatureMatrix) -> Vec<Vec<f64>> {
    x.data().row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// Evaluates `kernel` on every pair of rows.
///
/// Rows are filled in parallel; each entry depends only on its two rows, so
/// the result does not depend on scheduling, and `K[i][j]` and `K[j][i]` are
/// bitwise equal.
pub fn kernel_matrix(x: &FeatureMatrix, kernel: &Kernel) -> Result<GramMatrix> {
    if let Kernel::Rbf { gamma } = kernel {
        if !(*gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!("gamma must be positive, got {gamma}")));
        }
    }
    let rows = rows_of(x);
    let norms: Vec<f64> = rows.iter().map(|r| dot(r, r).sqrt()).collect();
    if *kernel == Kernel::Cosine {
        let zero: Vec<usize> = (0..rows.len()).filter(|&i| norms[i] == 0.0).collect();
        if !zero.is_empty() {
            return Err(Error::DegenerateRows { rows: zero });
        }
    }

    let n = rows.len();
    let filled: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| (0..n).map(|j| kernel.eval(&rows[i], &rows[j], norms[i], norms[j])).collect())
        .collect();
    Ok(GramMatrix(DMatrix::from_fn(n, n, |i, j| filled[i][j])))
}

/// Median heuristic: `1 / (p * median pairwise squared distance)` over at
/// most 1000 evenly strided rows. Falls back to `1 / p` when the median is 0.
pub fn default_gamma(x: &FeatureMatrix) -> f64 {
    let (t, p) = (x.len(), x.dim());
    let picks: Vec<usize> = if t <= GAMMA_SAMPLE {
        (0..t).collect()
    } else {
        (0..GAMMA_SAMPLE).map(|i| i * t / GAMMA_SAMPLE).collect()
    };
    let rows: Vec<Vec<f64>> = picks
        .iter()
        .map(|&i| x.data().row(i).iter().copied().collect())
        .collect();
    let mut distances: Vec<f64> = (0..rows.len())
        .flat_map(|i| ((i + 1)..rows.len()).map(move |j| (i, j)))
        .map(|(i, j)| squared_distance(&rows[i], &rows[j]))
        .collect();
    if distances.is_empty() {
        return 1.0 / p as f64;
    }
    distances.sort_by(f64::total_cmp);
    let mid = distances.len() / 2;
    let median = if distances.len().is_multiple_of(2) {
        0.5 * (distances[mid - 1] + distances[mid])
    } else {
        distances[mid]
    };
    if median > 0.0 {
        1.0 / (p as f64 * median)
    } else {
        1.0 / p as f64
    }
}

/// Kernel PCA onto one component: the leading eigenvector `v` of the
/// double-centered Gram matrix, scaled by the square root of its eigenvalue.
/// Oriented so the largest-magnitude entry is positive.
///
/// A leading eigenvalue at or below 1e-12 yields the all-zero embedding,
/// flagged degenerate.
pub fn kpca_embed(x: &FeatureMatrix, kernel: &Kernel) -> Result<Embedding1D> {
    let t = x.len();
    let name = match kernel {
        Kernel::Linear => "kpca-linear",
        Kernel::Cosine => "kpca-cosine",
        Kernel::Rbf { .. } => "kpca-rbf",
    };
    if t < 2 {
        return Err(Error::ZeroVariance(format!(
            "kernel PCA needs at least 2 frames, got {t}"
        )));
    }
    let gram = kernel_matrix(x, kernel)?;
    let (lambda, mut v) = top_eigenpair(&gram.centered());
    if lambda <= DEGENERATE_EIGENVALUE {
        return Ok(Embedding1D::new(vec![0.0; t], name)?.mark_degenerate());
    }
    orient(&mut v);
    let scale = lambda.sqrt();
    Embedding1D::new(v.iter().map(|e| e * scale).collect(), name)
}
