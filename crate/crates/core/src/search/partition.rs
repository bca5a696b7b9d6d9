// SPDX-License-Identifier: MIT OR Apache-2.0

//! Penalized optimal partitioning and its pruned variant.
//!
//! Both solve
//!
//! ```text
//! F(0) = -beta
//! F(s) = min_t { F(t) + C[t, s) + beta }
//! ```
//!
//! over admissible last change points `t` (`t = 0` or `min_len <= t`, and
//! `s - t >= min_len`). `F(T)` is the minimal total penalized cost.

use crate::cost::GaussianCost;
use crate::error::Result;
use crate::search::{finish, Algorithm, SearchParams};
use crate::signal::Segmentation;

/// Exact O(T^2) optimal partitioning.
pub fn opt_partition(model: &GaussianCost, params: &SearchParams) -> Result<Segmentation> {
    params.validate()?;
    let n = model.len();
    let min_len = params.min_len;
    let beta = params.beta;
    if n < 2 * min_len {
        return Ok(finish(model, Vec::new(), beta, Algorithm::OptPartition));
    }

    let mut best = vec![f64::INFINITY; n + 1];
    let mut last = vec![0usize; n + 1];
    best[0] = -beta;
    for s in min_len..=n {
        let admissible = std::iter::once(0).chain(min_len..=s.saturating_sub(min_len));
        let (mut value, mut arg) = (f64::INFINITY, 0);
        for t in admissible.filter(|&t| s - t >= min_len) {
            let v = best[t] + model.cost(t, s) + beta;
            if v < value {
                value = v;
                arg = t;
            }
        }
        best[s] = value;
        last[s] = arg;
    }

    let mut seg = finish(model, backtrack(&last, n), beta, Algorithm::OptPartition);
    seg.total_cost = best[n];
    Ok(seg)
}

/// Optimal partitioning with PELT pruning.
///
/// The Gaussian cost never increases when a segment is split, i.e.
/// `C[t, s) + C[s, u) <= C[t, u)`. Hence if `F(t) + C[t, s) > F(s)` then for
/// every later `u` with `u - s >= min_len`
///
/// ```text
/// F(t) + C[t, u) >= F(t) + C[t, s) + C[s, u) > F(s) + C[s, u)
/// ```
///
/// and `t` can never again be the optimal last change point. Such a `t` is
/// dropped once `s` itself becomes admissible, at `s + min_len`. The
/// candidates that survive are visited in the same ascending order as in
/// [`opt_partition`], so both return identical results.
pub fn pelt(model: &GaussianCost, params: &SearchParams) -> Result<Segmentation> {
    params.validate()?;
    let n = model.len();
    let min_len = params.min_len;
    let beta = params.beta;
    if n < 2 * min_len {
        return Ok(finish(model, Vec::new(), beta, Algorithm::Pelt));
    }

    let mut best = vec![f64::INFINITY; n + 1];
    let mut last = vec![0usize; n + 1];
    let mut expires = vec![usize::MAX; n + 1];
    let mut candidates: Vec<usize> = Vec::new();
    let mut partial: Vec<f64> = Vec::new();
    best[0] = -beta;

    for s in min_len..=n {
        let newest = s - min_len;
        if newest == 0 || newest >= min_len {
            candidates.push(newest);
        }
        candidates.retain(|&t| expires[t] > s);

        partial.clear();
        let (mut value, mut arg) = (f64::INFINITY, 0);
        for &t in &candidates {
            let p = best[t] + model.cost(t, s);
            partial.push(p);
            let v = p + beta;
            if v < value {
                value = v;
                arg = t;
            }
        }
        best[s] = value;
        last[s] = arg;

        for (&t, &p) in candidates.iter().zip(&partial) {
            if p > value && expires[t] == usize::MAX {
                expires[t] = s + min_len;
            }
        }
    }

    let mut seg = finish(model, backtrack(&last, n), beta, Algorithm::Pelt);
    seg.total_cost = best[n];
    Ok(seg)
}

fn backtrack(last: &[usize], n: usize) -> Vec<usize> {
    let mut changepoints = Vec::new();
    let mut s = n;
    while s > 0 {
        let t = last[s];
        if t > 0 {
            changepoints.push(t);
        }
        s = t;
    }
    changepoints.reverse();
    changepoints
}
