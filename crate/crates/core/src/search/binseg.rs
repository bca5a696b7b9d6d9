// SPDX-License-Identifier: MIT OR Apache-2.0

use crate::cost::GaussianCost;
use crate::error::Result;
use crate::search::{finish, Algorithm, SearchParams};
use crate::signal::Segmentation;

#[derive(Clone, Copy, Debug)]
struct Piece {
    start: usize,
    end: usize,
    /// Best split position and the cost decrease it buys.
    split: Option<(usize, f64)>,
}

impl Piece {
    fn new(model: &GaussianCost, start: usize, end: usize, min_len: usize) -> Self {
        let whole = model.cost(start, end);
        let mut split: Option<(usize, f64)> = None;
        if end - start >= 2 * min_len {
            for t in start + min_len..=end - min_len {
                let gain = whole - (model.cost(start, t) + model.cost(t, end));
                if split.is_none_or(|(_, g)| gain > g) {
                    split = Some((t, gain));
                }
            }
        }
        Self { start, end, split }
    }
}

/// Greedy binary segmentation: repeatedly splits the segment whose best
/// single split lowers the cost the most, until no split gains `beta`.
pub fn binseg(model: &GaussianCost, params: &SearchParams) -> Result<Segmentation> {
    params.validate()?;
    let min_len = params.min_len;
    let mut pieces = vec![Piece::new(model, 0, model.len(), min_len)];

    loop {
        let mut chosen: Option<(usize, usize, f64)> = None;
        for (i, piece) in pieces.iter().enumerate() {
            if let Some((t, gain)) = piece.split {
                if chosen.is_none_or(|(_, _, g)| gain > g) {
                    chosen = Some((i, t, gain));
                }
            }
        }
        let Some((i, t, gain)) = chosen else { break };
        if gain < params.beta {
            break;
        }
        let Piece { start, end, .. } = pieces[i];
        pieces[i] = Piece::new(model, t, end, min_len);
        pieces.insert(i, Piece::new(model, start, t, min_len));
    }

    let changepoints = pieces.iter().skip(1).map(|p| p.start).collect();
    Ok(finish(model, changepoints, params.beta, Algorithm::BinSeg))
}
