// SPDX-License-Identifier: MIT OR Apache-2.0

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::signal::Embedding1D;

/// Default lower bound applied to segment variances.
pub const DEFAULT_VAR_FLOOR: f64 = 1e-8;

/// Gaussian maximum-likelihood segment cost with a changing mean and
/// variance: twice the negative log-likelihood of a segment under a normal
/// distribution fitted to it,
///
/// ```text
/// C[a, b) = L * (ln(2 pi) + ln(max(var, floor)) + 1),   L = b - a,
/// ```
///
/// where `var` is the biased empirical variance of the segment. Costs are
/// answered in O(1) from prefix sums. The sums are taken over values shifted
/// by the signal mean, which leaves every variance unchanged and keeps the
/// subtraction in `sum_sq - sum^2 / L` well conditioned.
#[derive(Clone, Debug)]
pub struct GaussianCost {
    prefix_sum: Vec<f64>,
    prefix_sq: Vec<f64>,
    shift: f64,
    var_floor: f64,
}

impl GaussianCost {
    pub fn new(signal: &Embedding1D) -> Self {
        Self::from_values(signal.values(), DEFAULT_VAR_FLOOR)
            .expect("default variance floor is positive")
    }

    pub fn with_var_floor(signal: &Embedding1D, var_floor: f64) -> Result<Self> {
        Self::from_values(signal.values(), var_floor)
    }

    pub fn from_values(values: &[f64], var_floor: f64) -> Result<Self> {
        if !(var_floor > 0.0 && var_floor.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "var_floor must be a positive finite number, got {var_floor}"
            )));
        }
        if values.is_empty() {
            return Err(Error::EmptyInput("signal has no values".into()));
        }
        let shift = values.iter().sum::<f64>() / values.len() as f64;
        let mut prefix_sum = Vec::with_capacity(values.len() + 1);
        let mut prefix_sq = Vec::with_capacity(values.len() + 1);
        let (mut s, mut q) = (0.0, 0.0);
        prefix_sum.push(s);
        prefix_sq.push(q);
        for &v in values {
            let d = v - shift;
            s += d;
            q += d * d;
            prefix_sum.push(s);
            prefix_sq.push(q);
        }
        Ok(Self {
            prefix_sum,
            prefix_sq,
            shift,
            var_floor,
        })
    }

    /// Signal length `T`.
    pub fn len(&self) -> usize {
        self.prefix_sum.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn var_floor(&self) -> f64 {
        self.var_floor
    }

    /// Biased variance of `[start, end)` before flooring.
    pub fn variance(&self, start: usize, end: usize) -> f64 {
        let len = (end - start) as f64;
        let s = self.prefix_sum[end] - self.prefix_sum[start];
        let q = self.prefix_sq[end] - self.prefix_sq[start];
        ((q - s * s / len) / len).max(0.0)
    }

    pub fn mean(&self, start: usize, end: usize) -> f64 {
        let len = (end - start) as f64;
        self.shift + (self.prefix_sum[end] - self.prefix_sum[start]) / len
    }

    /// Cost of `[start, end)`, checking the bounds.
    pub fn segment_cost(&self, start: usize, end: usize) -> Result<f64> {
        if start >= end || end > self.len() {
            return Err(Error::Interval { start, end });
        }
        Ok(self.cost(start, end))
    }

    /// Unchecked cost of `[start, end)`; callers guarantee `start < end <= T`.
    #[inline]
    pub fn cost(&self, start: usize, end: usize) -> f64 {
        debug_assert!(start < end && end <= self.len());
        let len = (end - start) as f64;
        let var = self.variance(start, end).max(self.var_floor);
        len * (TAU.ln() + var.ln() + 1.0)
    }

    /// Sum of segment costs for a list of change points, without penalty.
    pub fn partition_cost(&self, changepoints: &[usize]) -> f64 {
        let mut total = 0.0;
        let mut start = 0;
        for &end in changepoints.iter().chain(std::iter::once(&self.len())) {
            total += self.cost(start, end);
            start = end;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(values: &[f64]) -> GaussianCost {
        GaussianCost::from_values(values, DEFAULT_VAR_FLOOR).unwrap()
    }

    /// Direct O(L) evaluation of the same formula.
    fn direct_cost(values: &[f64], floor: f64) -> f64 {
        let len = values.len() as f64;
        let mean = values.iter().sum::<f64>() / len;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / len;
        len * ((2.0 * std::f64::consts::PI).ln() + var.max(floor).ln() + 1.0)
    }

    #[test]
    fn two_point_segment() {
        // L = 2, mean 2, variance 1: 2 * (ln 2pi + 0 + 1)
        let c = model(&[1.0, 3.0]).segment_cost(0, 2).unwrap();
        assert!((c - 5.675_754_132_818_691).abs() < 1e-12, "{c}");
    }

    #[test]
    fn constant_segment_uses_the_floor() {
        let c = model(&[5.0, 5.0, 5.0]).segment_cost(0, 3).unwrap();
        // 3 * (ln 2pi + ln 1e-8 + 1)
        assert!((c - (-46.748_411_032_629_065)).abs() < 1e-9, "{c}");
    }

    #[test]
    fn single_point_segment() {
        let m = model(&[0.3, -2.0, 7.5]);
        let expected = TAU.ln() + DEFAULT_VAR_FLOOR.ln() + 1.0;
        for i in 0..3 {
            assert_eq!(m.segment_cost(i, i + 1).unwrap(), expected);
        }
    }

    #[test]
    fn empty_interval_is_an_error() {
        let m = model(&[1.0, 2.0, 3.0]);
        assert!(matches!(m.segment_cost(2, 2), Err(Error::Interval { .. })));
        assert!(matches!(m.segment_cost(2, 1), Err(Error::Interval { .. })));
        assert!(matches!(m.segment_cost(0, 4), Err(Error::Interval { .. })));
    }

    #[test]
    fn rejects_bad_floor() {
        assert!(GaussianCost::from_values(&[1.0], 0.0).is_err());
        assert!(GaussianCost::from_values(&[1.0], f64::NAN).is_err());
    }

    #[test]
    fn segment_mean() {
        let m = model(&[1.0, 2.0, 3.0, 10.0]);
        assert!((m.mean(0, 3) - 2.0).abs() < 1e-12);
        assert!((m.mean(3, 4) - 10.0).abs() < 1e-12);
    }

    proptest::proptest! {
        #[test]
        fn prefix_cost_matches_direct_sum(
            values in proptest::collection::vec(-50.0f64..50.0, 2..200),
            a in 0usize..200,
            b in 0usize..200,
        ) {
            let n = values.len();
            let (start, end) = (a % n, b % n + 1);
            proptest::prop_assume!(start < end && end - start >= 2);
            let got = model(&values).cost(start, end);
            let want = direct_cost(&values[start..end], DEFAULT_VAR_FLOOR);
            proptest::prop_assert!((got - want).abs() <= 1e-9 * want.abs().max(1.0), "{got} vs {want}");
        }
    }
}
