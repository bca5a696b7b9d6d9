// SPDX-License-Identifier: MIT OR Apache-2.0

//! Change-point search over a [`GaussianCost`].
//!
//! All detectors share one tie-breaking rule: whenever two candidates give
//! the same objective value, the smaller index wins. With exact costs this
//! makes every output deterministic and lets the exact searches agree bit
//! for bit.

mod binseg;
mod dp;
mod partition;
mod window;

use std::fmt;
use std::str::FromStr;

pub use binseg::binseg;
pub use dp::dp_fixed_k;
pub use partition::{opt_partition, pelt};
pub use window::{window_detect, window_discrepancy};

use crate::cost::GaussianCost;
use crate::error::{Error, Result};
use crate::signal::Segmentation;

/// Penalty used when none is given.
pub const DEFAULT_BETA: f64 = 250.0;
pub const DEFAULT_WINDOW: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub struct SearchParams {
    /// Cost added per change point.
    pub beta: f64,
    /// Minimum number of samples in every segment.
    pub min_len: usize,
    /// Exact number of change points for [`dp_fixed_k`].
    pub max_changepoints: Option<usize>,
    /// Half-width of the sliding windows for [`window_detect`].
    pub window_width: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            beta: DEFAULT_BETA,
            min_len: 1,
            max_changepoints: None,
            window_width: DEFAULT_WINDOW,
        }
    }
}

impl SearchParams {
    pub fn with_beta(beta: f64) -> Self {
        Self {
            beta,
            ..Self::default()
        }
    }

    pub fn min_len(mut self, min_len: usize) -> Self {
        self.min_len = min_len;
        self
    }

    pub fn window_width(mut self, width: usize) -> Self {
        self.window_width = width;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "beta must be finite and >= 0, got {}",
                self.beta
            )));
        }
        if self.min_len == 0 {
            return Err(Error::InvalidParameter("min_len must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Pelt,
    OptPartition,
    BinSeg,
    Window,
    DpFixedK,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Pelt,
        Algorithm::OptPartition,
        Algorithm::BinSeg,
        Algorithm::Window,
        Algorithm::DpFixedK,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Pelt => "pelt",
            Algorithm::OptPartition => "op",
            Algorithm::BinSeg => "binseg",
            Algorithm::Window => "window",
            Algorithm::DpFixedK => "dpk",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown algorithm {s:?}")))
    }
}

/// Runs `algorithm` with `params`.
pub fn detect(model: &GaussianCost, algorithm: Algorithm, params: &SearchParams) -> Result<Segmentation> {
    match algorithm {
        Algorithm::Pelt => pelt(model, params),
        Algorithm::OptPartition => opt_partition(model, params),
        Algorithm::BinSeg => binseg(model, params),
        Algorithm::Window => window_detect(model, params),
        Algorithm::DpFixedK => {
            let k = params.max_changepoints.ok_or_else(|| {
                Error::InvalidParameter("the dpk search needs a change-point count".into())
            })?;
            dp_fixed_k(model, k, params.min_len)
        }
    }
}

pub(crate) fn finish(
    model: &GaussianCost,
    changepoints: Vec<usize>,
    beta: f64,
    algorithm: Algorithm,
) -> Segmentation {
    let total_cost = model.partition_cost(&changepoints) + changepoints.len() as f64 * beta;
    Segmentation {
        changepoints,
        total_cost,
        beta,
        algorithm: algorithm.name().to_owned(),
        len: model.len(),
    }
}
