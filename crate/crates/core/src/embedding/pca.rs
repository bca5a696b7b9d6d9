// SPDX-License-Identifier: MIT OR Apache-2.0

use nalgebra::{DMatrix, DVector};

use super::eigen::{orient, power_iteration, top_eigenpair, DENSE_LIMIT};
use crate::error::{Error, Result};
use crate::signal::{Embedding1D, FeatureMatrix};

/// Subtracts every column's mean. Columns are not rescaled.
pub fn center_columns(x: &FeatureMatrix) -> FeatureMatrix {
    let data = centered(x.data());
    FeatureMatrix::new(data, x.frame_ids().map(<[i64]>::to_vec))
        .expect("centering preserves shape and finiteness")
}

fn centered(x: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = x.clone();
    let n = x.nrows() as f64;
    for mut col in out.column_iter_mut() {
        let mean = col.sum() / n;
        col.add_scalar_mut(-mean);
    }
    out
}

/// Projection of the centered matrix onto its leading principal direction.
///
/// Returns the per-frame scores and the fraction of total variance they
/// explain. The direction is oriented so that its largest-magnitude
/// loading is positive. The eigenproblem is solved on whichever of the
/// `p x p` covariance or the `T x T` inner-product matrix is smaller.
pub fn pca_embed(x: &FeatureMatrix) -> Result<(Embedding1D, f64)> {
    let (t, p) = (x.len(), x.dim());
    if t < 2 {
        return Err(Error::ZeroVariance(format!("PCA needs at least 2 frames, got {t}")));
    }
    let data = x.data();
    let constant = data
        .column_iter()
        .all(|col| col.iter().all(|&v| v == col[0]));
    if constant {
        return Err(Error::ZeroVariance(
            "every feature column is constant; there is nothing to project".into(),
        ));
    }

    let xc = centered(data);
    let mut direction = if p <= t {
        if p <= DENSE_LIMIT {
            top_eigenpair(&xc.tr_mul(&xc)).1
        } else {
            power_iteration(p, |v| xc.tr_mul(&(&xc * v))).1
        }
    } else {
        let scores_dir = if t <= DENSE_LIMIT {
            top_eigenpair(&(&xc * xc.transpose())).1
        } else {
            power_iteration(t, |u| &xc * xc.tr_mul(u)).1
        };
        let w: DVector<f64> = xc.tr_mul(&scores_dir);
        let norm = w.norm();
        w / norm
    };
    orient(&mut direction);

    let scores = &xc * &direction;
    let total = xc.norm_squared();
    let explained = if total > 0.0 {
        (scores.norm_squared() / total).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let embedding = Embedding1D::new(scores.as_slice().to_vec(), "pca")?;
    Ok((embedding, explained))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::SymmetricEigen;

    fn matrix(rows: &[Vec<f64>]) -> FeatureMatrix {
        FeatureMatrix::from_rows(rows).unwrap()
    }

    /// Sample covariance (denominator T - 1) computed entry by entry.
    fn covariance(x: &FeatureMatrix) -> DMatrix<f64> {
        let (t, p) = (x.len(), x.dim());
        let d = x.data();
        let means: Vec<f64> = (0..p).map(|j| (0..t).map(|i| d[(i, j)]).sum::<f64>() / t as f64).collect();
        DMatrix::from_fn(p, p, |a, b| {
            (0..t).map(|i| (d[(i, a)] - means[a]) * (d[(i, b)] - means[b])).sum::<f64>() / (t - 1) as f64
        })
    }

    fn variance(v: &[f64]) -> f64 {
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    }

    #[test]
    fn centering_examples() {
        let c = center_columns(&matrix(&[vec![1.0, 3.0], vec![3.0, 5.0]]));
        assert_eq!(c.data(), &DMatrix::from_row_slice(2, 2, &[-1.0, -1.0, 1.0, 1.0]));
        let z = center_columns(&matrix(&[vec![0.0, 0.0], vec![0.0, 0.0]]));
        assert!(z.data().iter().all(|&v| v == 0.0));
        let one = center_columns(&matrix(&[vec![7.0, 7.0]]));
        assert!(one.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn rank_one_diagonal() {
        let (e, ratio) = pca_embed(&matrix(&[vec![1.0, 1.0], vec![2.0, 2.0], vec![3.0, 3.0]])).unwrap();
        let s = std::f64::consts::SQRT_2;
        for (got, want) in e.values().iter().zip([-s, 0.0, s]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        assert!((ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn follows_the_dominant_column() {
        let rows: Vec<Vec<f64>> = (0..200)
            .map(|i| {
                let a = ((i * 7919) % 101) as f64 - 50.0;
                let b = (((i * 104_729) % 13) as f64 - 6.0) * 1e-3;
                vec![a * 0.34, b]
            })
            .collect();
        let (e, _) = pca_embed(&matrix(&rows)).unwrap();
        let col: Vec<f64> = rows.iter().map(|r| r[0]).collect();
        let n = col.len() as f64;
        let (ma, mb) = (col.iter().sum::<f64>() / n, e.values().iter().sum::<f64>() / n);
        let cov: f64 = col.iter().zip(e.values()).map(|(a, b)| (a - ma) * (b - mb)).sum();
        let corr = cov / (variance(&col) * variance(e.values())).sqrt() / (n - 1.0);
        assert!(corr.abs() > 0.99, "{corr}");
    }

    #[test]
    fn constant_matrix_is_rejected() {
        let err = pca_embed(&matrix(&[vec![2.5, 2.5], vec![2.5, 2.5]])).unwrap_err();
        assert!(matches!(err, Error::ZeroVariance(_)));
        assert!(matches!(pca_embed(&matrix(&[vec![1.0, 2.0]])), Err(Error::ZeroVariance(_))));
    }

    #[test]
    fn variance_equals_top_eigenvalue() {
        let rows: Vec<Vec<f64>> = (0..40)
            .map(|i| (0..5).map(|j| (((i * 31 + j * 17) * 2_654_435_761_usize) % 1000) as f64 / 100.0).collect())
            .collect();
        let x = matrix(&rows);
        let (e, ratio) = pca_embed(&x).unwrap();
        let eig = SymmetricEigen::new(covariance(&x));
        let top = eig.eigenvalues.max();
        let v = variance(e.values());
        assert!((v - top).abs() <= 1e-8 * top, "{v} vs {top}");
        assert!((ratio - top / eig.eigenvalues.sum()).abs() < 1e-10);
    }

    #[test]
    fn wide_matrix_uses_the_gram_side() {
        // p > T: both routes should agree with the covariance oracle.
        let rows: Vec<Vec<f64>> = (0..6)
            .map(|i| (0..20).map(|j| ((i * 13 + j * 7) % 9) as f64 + (i as f64) * (j as f64) * 0.1).collect())
            .collect();
        let x = matrix(&rows);
        let (e, _) = pca_embed(&x).unwrap();
        let eig = SymmetricEigen::new(covariance(&x));
        let top = eig.eigenvalues.max();
        assert!((variance(e.values()) - top).abs() <= 1e-8 * top);
    }

    #[test]
    fn repeated_calls_are_identical() {
        let rows: Vec<Vec<f64>> = (0..30).map(|i| vec![(i as f64).sin(), (i as f64 * 0.3).cos(), i as f64 * 0.01]).collect();
        let x = matrix(&rows);
        let a = pca_embed(&x).unwrap().0;
        let b = pca_embed(&x).unwrap().0;
        assert_eq!(
            a.values().iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
            b.values().iter().map(|v| v.to_bits()).collect::<Vec<_>>()
        );
    }

    proptest::proptest! {
        #[test]
        fn translation_invariance(
            flat in proptest::collection::vec(-10.0f64..10.0, 24),
            shift in proptest::collection::vec(-1e3f64..1e3, 3),
        ) {
            let rows: Vec<Vec<f64>> = flat.chunks(3).map(<[f64]>::to_vec).collect();
            let moved: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().zip(&shift).map(|(a, b)| a + b).collect()).collect();
            let a = pca_embed(&matrix(&rows)).unwrap().0;
            let b = pca_embed(&matrix(&moved)).unwrap().0;
            // The leading direction is only defined up to the spectral gap.
            let eig = SymmetricEigen::new(covariance(&matrix(&rows)));
            let mut ev: Vec<f64> = eig.eigenvalues.iter().copied().collect();
            ev.sort_by(|x, y| y.total_cmp(x));
            proptest::prop_assume!(ev[0] - ev[1] > 1e-3 * ev[0]);
            for (x, y) in a.values().iter().zip(b.values()) {
                proptest::prop_assert!((x - y).abs() < 1e-8, "{x} vs {y}");
            }
        }
    }
}
