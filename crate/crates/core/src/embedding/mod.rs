// SPDX-License-Identifier: MIT OR Apache-2.0

//! One-dimensional embeddings of a [`FeatureMatrix`]: centered PCA and
//! kernel PCA with cosine or Gaussian (RBF) kernels.

mod eigen;
mod kernel;
mod pca;

use std::fmt;
use std::str::FromStr;

pub use kernel::{default_gamma, kernel_matrix, kpca_embed, GramMatrix, Kernel};
pub use pca::{center_columns, pca_embed};

use crate::error::{Error, Result};
use crate::signal::{Embedding1D, FeatureMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum EmbeddingMethod {
    #[default]
    Pca,
    KpcaCosine,
    KpcaRbf,
}

impl EmbeddingMethod {
    pub const ALL: [EmbeddingMethod; 3] = [
        EmbeddingMethod::Pca,
        EmbeddingMethod::KpcaCosine,
        EmbeddingMethod::KpcaRbf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EmbeddingMethod::Pca => "pca",
            EmbeddingMethod::KpcaCosine => "kpca-cosine",
            EmbeddingMethod::KpcaRbf => "kpca-rbf",
        }
    }

    pub fn is_kernel(self) -> bool {
        self != EmbeddingMethod::Pca
    }
}

impl fmt::Display for EmbeddingMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EmbeddingMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EmbeddingMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown embedding {s:?}")))
    }
}

/// Embedding method plus its parameters. Only one component is produced.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct EmbeddingConfig {
    pub method: EmbeddingMethod,
    /// RBF width; `None` picks [`default_gamma`] from the data.
    pub gamma: Option<f64>,
}

impl EmbeddingConfig {
    pub fn new(method: EmbeddingMethod) -> Self {
        Self { method, gamma: None }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = Some(gamma);
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.gamma {
            Some(g) if !(g > 0.0 && g.is_finite()) => Err(Error::InvalidParameter(format!(
                "gamma must be positive, got {g}"
            ))),
            _ => Ok(()),
        }
    }

    /// Resolves the kernel this configuration uses on `x`, or `None` for PCA.
    pub fn kernel(&self, x: &FeatureMatrix) -> Result<Option<Kernel>> {
        self.validate()?;
        Ok(match self.method {
            EmbeddingMethod::Pca => None,
            EmbeddingMethod::KpcaCosine => Some(Kernel::Cosine),
            EmbeddingMethod::KpcaRbf => Some(Kernel::Rbf {
                gamma: self.gamma.unwrap_or_else(|| default_gamma(x)),
            }),
        })
    }
}

/// Projects `x` to one dimension with the configured method.
pub fn embed(x: &FeatureMatrix, cfg: &EmbeddingConfig) -> Result<Embedding1D> {
    match cfg.kernel(x)? {
        None => pca_embed(x).map(|(embedding, _)| embedding),
        Some(kernel) => kpca_embed(x, &kernel),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names_round_trip() {
        for m in EmbeddingMethod::ALL {
            assert_eq!(m.name().parse::<EmbeddingMethod>().unwrap(), m);
        }
        assert!("tsne".parse::<EmbeddingMethod>().is_err());
    }

    #[test]
    fn gamma_must_be_positive() {
        let cfg = EmbeddingConfig::new(EmbeddingMethod::KpcaRbf).with_gamma(0.0);
        assert!(cfg.validate().is_err());
        assert!(EmbeddingConfig::new(EmbeddingMethod::KpcaRbf).with_gamma(0.5).validate().is_ok());
    }

    #[test]
    fn dispatch_labels_the_source() {
        let x = FeatureMatrix::from_rows(&[
            vec![1.0, 0.5],
            vec![2.0, 0.1],
            vec![0.3, 3.0],
            vec![1.5, 1.5],
        ])
        .unwrap();
        for m in EmbeddingMethod::ALL {
            let e = embed(&x, &EmbeddingConfig::new(m)).unwrap();
            assert_eq!(e.source(), m.name());
            assert_eq!(e.len(), 4);
        }
    }
}
