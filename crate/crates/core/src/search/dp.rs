// SPDX-License-Identifier: MIT OR Apache-2.0

use crate::cost::GaussianCost;
use crate::error::{Error, Result};
use crate::search::{finish, Algorithm};
use crate::signal::Segmentation;

/// Exact segmentation with exactly `k` change points, minimizing the
/// unpenalized total cost. O(k T^2) time, O(k T) memory.
pub fn dp_fixed_k(model: &GaussianCost, k: usize, min_len: usize) -> Result<Segmentation> {
    let n = model.len();
    if min_len == 0 {
        return Err(Error::InvalidParameter("min_len must be >= 1".into()));
    }
    let max_k = (n / min_len).saturating_sub(1);
    if k == 0 || k > max_k {
        return Err(Error::Infeasible(format!(
            "cannot place {k} change points in {n} samples with min_len {min_len} (allowed 1..={max_k})"
        )));
    }

    // best[s]: minimal cost of [0, s) cut into j + 1 segments, for the
    // current layer j.
    let mut best: Vec<f64> = (0..=n)
        .map(|s| if s >= min_len { model.cost(0, s) } else { f64::INFINITY })
        .collect();
    let mut args = vec![vec![0usize; n + 1]; k];

    for j in 1..=k {
        let mut next = vec![f64::INFINITY; n + 1];
        let first = (j + 1) * min_len;
        // Only the full signal matters on the last layer.
        let ends = if j == k { n..=n } else { first..=n };
        for s in ends {
            let (mut value, mut arg) = (f64::INFINITY, 0);
            let lo = j * min_len;
            for (t, &prev) in best.iter().enumerate().take(s - min_len + 1).skip(lo) {
                let v = prev + model.cost(t, s);
                if v < value {
                    value = v;
                    arg = t;
                }
            }
            next[s] = value;
            args[j - 1][s] = arg;
        }
        best = next;
    }

    let mut changepoints = Vec::with_capacity(k);
    let mut s = n;
    for j in (0..k).rev() {
        s = args[j][s];
        changepoints.push(s);
    }
    changepoints.reverse();

    let mut seg = finish(model, changepoints, 0.0, Algorithm::DpFixedK);
    seg.total_cost = best[n];
    Ok(seg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::DEFAULT_VAR_FLOOR;

    fn model(values: &[f64]) -> GaussianCost {
        GaussianCost::from_values(values, DEFAULT_VAR_FLOOR).unwrap()
    }

    #[test]
    fn single_split_of_a_step() {
        let m = model(&[0.0, 0.0, 10.0, 10.0]);
        // The three candidate splits, enumerated.
        let costs: Vec<f64> = (1..4).map(|t| m.partition_cost(&[t])).collect();
        let best = (1..4).min_by(|&a, &b| costs[a - 1].total_cmp(&costs[b - 1])).unwrap();
        assert_eq!(best, 2);
        let seg = dp_fixed_k(&m, 1, 1).unwrap();
        assert_eq!(seg.changepoints, vec![2]);
        assert_eq!(seg.beta, 0.0);
        assert_eq!(seg.total_cost, costs[1]);
    }

    #[test]
    fn constant_signal_split_costs_the_same() {
        let m = model(&[2.0; 10]);
        let seg = dp_fixed_k(&m, 1, 1).unwrap();
        assert_eq!(seg.changepoints.len(), 1);
        seg.validate(1).unwrap();
        let unsplit = m.cost(0, 10);
        assert!((seg.total_cost - unsplit).abs() <= 1e-9 * unsplit.abs());
        assert_eq!(dp_fixed_k(&m, 1, 1).unwrap(), seg);
    }

    #[test]
    fn infeasible_counts() {
        let m = model(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert!(matches!(dp_fixed_k(&m, 6, 1), Err(Error::Infeasible(_))));
        assert!(matches!(dp_fixed_k(&m, 0, 1), Err(Error::Infeasible(_))));
        assert!(matches!(dp_fixed_k(&m, 2, 3), Err(Error::Infeasible(_))));
        assert!(dp_fixed_k(&m, 1, 3).is_ok());
        assert!(dp_fixed_k(&m, 5, 1).is_ok());
    }

    #[test]
    fn min_len_is_respected() {
        let v: Vec<f64> = (0..30).map(|i| ((i * 13) % 7) as f64 + (i / 10) as f64 * 5.0).collect();
        let m = model(&v);
        for min_len in 1..=5 {
            let seg = dp_fixed_k(&m, 2, min_len).unwrap();
            assert_eq!(seg.changepoints.len(), 2);
            seg.validate(min_len).unwrap();
        }
    }
}
