// SPDX-License-Identifier: MIT OR Apache-2.0

use crate::cost::GaussianCost;
use crate::error::{Error, Result};
use crate::search::{finish, Algorithm, SearchParams};
use crate::signal::Segmentation;

/// Discrepancy between the two adjacent windows of half-width `w` around
/// every `t` in `w..=T-w`:
///
/// ```text
/// d(t) = C[t-w, t+w) - C[t-w, t) - C[t, t+w)
/// ```
///
/// Returns `(t, d(t))` pairs in increasing `t`.
pub fn window_discrepancy(model: &GaussianCost, w: usize) -> Result<Vec<(usize, f64)>> {
    let n = model.len();
    if w < 2 || n < 2 * w {
        return Err(Error::Window {
            width: w,
            needed: 2 * w.max(2),
            len: n,
        });
    }
    Ok((w..=n - w)
        .map(|t| {
            let d = model.cost(t - w, t + w) - model.cost(t - w, t) - model.cost(t, t + w);
            (t, d)
        })
        .collect())
}

/// Sliding-window detection: local maxima of the discrepancy curve above
/// `beta`, taken greedily from the highest down. A peak is skipped when it
/// lies closer than `max(w, min_len)` to one already taken.
pub fn window_detect(model: &GaussianCost, params: &SearchParams) -> Result<Segmentation> {
    params.validate()?;
    let w = params.window_width;
    let curve = window_discrepancy(model, w)?;
    let n = model.len();
    let radius = w.max(params.min_len);

    let mut peaks: Vec<(usize, f64)> = curve
        .iter()
        .enumerate()
        .filter(|&(i, &(t, d))| {
            let left = i == 0 || d >= curve[i - 1].1;
            let right = i + 1 == curve.len() || d >= curve[i + 1].1;
            d > params.beta && left && right && t >= params.min_len && n - t >= params.min_len
        })
        .map(|(_, &p)| p)
        .collect();
    peaks.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));

    let mut taken: Vec<usize> = Vec::new();
    for (t, _) in peaks {
        if taken.iter().all(|&s| s.abs_diff(t) >= radius) {
            taken.push(t);
        }
    }
    taken.sort_unstable();
    Ok(finish(model, taken, params.beta, Algorithm::Window))
}
