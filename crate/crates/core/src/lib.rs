// SPDX-License-Identifier: MIT OR Apache-2.0

#![forbid(unsafe_code)]

//! Offline temporal segmentation of per-frame feature sequences.
//!
//! A `T x p` [`FeatureMatrix`] is reduced to a one-dimensional
//! [`Embedding1D`] (PCA or kernel PCA), boundaries are searched on it with a
//! Gaussian maximum-likelihood segment cost ([`GaussianCost`]) and a
//! per-change penalty, and the result can be scored against per-frame class
//! labels.
//!
//! ```
//! use seglens_core::{search, synth, GaussianCost, SearchParams};
//!
//! let specs = [synth::SegmentSpec::new(60, 0.0, 1.0), synth::SegmentSpec::new(60, 6.0, 1.0)];
//! let (signal, truth) = synth::gen_piecewise_gaussian(7, &specs).unwrap();
//! let model = GaussianCost::new(&signal);
//! let seg = search::pelt(&model, &SearchParams::with_beta(20.0)).unwrap();
//! assert_eq!(seg.changepoints.len(), truth.transitions.len());
//! ```

pub mod cost;
pub mod embedding;
pub mod error;
pub mod eval;
pub mod search;
pub mod signal;
pub mod synth;

pub use cost::{GaussianCost, DEFAULT_VAR_FLOOR};
pub use embedding::{EmbeddingConfig, EmbeddingMethod};
pub use error::{Error, ErrorKind, Result};
pub use eval::{EvalReport, TransitionTruth};
pub use search::{Algorithm, SearchParams};
pub use signal::{Embedding1D, FeatureMatrix, LabelSequence, Segmentation, SegmentationRecord};
