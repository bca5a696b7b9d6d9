// SPDX-License-Identifier: MIT OR Apache-2.0

//! Leading eigenpair of a symmetric positive semi-definite operator.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Problems up to this size go to a dense symmetric eigensolver.
pub(crate) const DENSE_LIMIT: usize = 512;
const TOLERANCE: f64 = 1e-10;
const MAX_ITERATIONS: usize = 10_000;

/// Largest eigenvalue and a unit eigenvector of a symmetric matrix.
pub(crate) fn top_eigenpair(m: &DMatrix<f64>) -> (f64, DVector<f64>) {
    let n = m.nrows();
    if n <= DENSE_LIMIT {
        let eig = SymmetricEigen::new(m.clone());
        let mut best = 0;
        for i in 1..n {
            if eig.eigenvalues[i] > eig.eigenvalues[best] {
                best = i;
            }
        }
        (eig.eigenvalues[best], eig.eigenvectors.column(best).into_owned())
    } else {
        power_iteration(n, |v| m * v)
    }
}

/// Power iteration on a PSD operator given as a matrix-vector product.
pub(crate) fn power_iteration<F>(n: usize, apply: F) -> (f64, DVector<f64>)
where
    F: Fn(&DVector<f64>) -> DVector<f64>,
{
    let mut v = start_vector(n);
    for _ in 0..MAX_ITERATIONS {
        let w = apply(&v);
        let norm = w.norm();
        if norm == 0.0 {
            return (0.0, v);
        }
        let next = w / norm;
        let moved = (&next - &v).norm();
        v = next;
        if moved <= TOLERANCE {
            break;
        }
    }
    let lambda = v.dot(&apply(&v));
    (lambda, v)
}

/// Fixed, non-symmetric start so that no eigendirection is missed by
/// construction (a constant vector would be annihilated by centering).
fn start_vector(n: usize) -> DVector<f64> {
    let v = DVector::from_fn(n, |i, _| 1.0 + ((i as u64 * 2_654_435_761) % 1_000) as f64 / 1_000.0);
    let norm = v.norm();
    v / norm
}

/// Flips `v` so that its entry of largest magnitude is positive. Ties go to
/// the lowest index.
pub(crate) fn orient(v: &mut DVector<f64>) {
    let mut pivot = 0;
    for i in 1..v.len() {
        if v[i].abs() > v[pivot].abs() {
            pivot = i;
        }
    }
    if !v.is_empty() && v[pivot] < 0.0 {
        v.neg_mut();
    }
}
