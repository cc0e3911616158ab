//! Nonincreasing, right-continuous, finitely supported step functions on
//! `(0, ∞)`, stored symbolically as breakpoints and values.
//!
//! `f(t) = v_i` on `[t_{i-1}, t_i)` with `t_0 = 0`, and `f(t) = 0` for
//! `t ≥ t_m`. Breakpoints are strictly increasing and values strictly
//! decreasing and positive; the empty function is zero.

use crate::error::{Error, Result};

/// Adjacent values within this relative distance are merged when a step
/// function is assembled from eigenvalues.
pub const MERGE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds a step function from explicit breakpoints and values.
    ///
    /// Values must be positive and nonincreasing; equal neighbours are merged.
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(Error::Contract(format!(
                "{} breakpoints but {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        let mut prev_t = 0.0;
        let mut prev_v = f64::INFINITY;
        for (&t, &v) in breakpoints.iter().zip(&values) {
            if !(t.is_finite() && t > prev_t) {
                return Err(Error::Contract(format!(
                    "breakpoints must be finite and strictly increasing from 0, got {t} after {prev_t}"
                )));
            }
            if !(v.is_finite() && v > 0.0 && v <= prev_v) {
                return Err(Error::Contract(format!(
                    "values must be finite, positive and nonincreasing, got {v} after {prev_v}"
                )));
            }
            prev_t = t;
            prev_v = v;
        }
        Ok(Self::merged(breakpoints, values, 0.0))
    }

    /// `value` on `[0, length)`.
    pub fn indicator(value: f64, length: f64) -> Result<Self> {
        Self::new(vec![length], vec![value])
    }

    /// Rearranges `(value, weight)` pairs sorted by descending value into a
    /// step function: the j-th value occupies an interval of length `w_j`.
    /// Pairs with nonpositive value or weight are skipped.
    pub fn from_weighted_values(pairs: &[(f64, f64)]) -> Self {
        let mut bps = Vec::with_capacity(pairs.len());
        let mut vals = Vec::with_capacity(pairs.len());
        let mut t = 0.0;
        for &(v, w) in pairs {
            if v <= 0.0 || w <= 0.0 {
                continue;
            }
            t += w;
            bps.push(t);
            vals.push(v);
        }
        Self::merged(bps, vals, MERGE_TOL)
    }

    fn merged(bps: Vec<f64>, vals: Vec<f64>, rel_tol: f64) -> Self {
        let mut out_b: Vec<f64> = Vec::with_capacity(bps.len());
        let mut out_v: Vec<f64> = Vec::with_capacity(vals.len());
        for (t, v) in bps.into_iter().zip(vals) {
            match out_v.last() {
                Some(&last) if (last - v).abs() <= rel_tol * last => {
                    *out_b.last_mut().unwrap() = t;
                }
                _ => {
                    out_b.push(t);
                    out_v.push(v);
                }
            }
        }
        StepFunction {
            breakpoints: out_b,
            values: out_v,
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Measure of the support, `t_m` (0 for the zero function).
    pub fn support(&self) -> f64 {
        self.breakpoints.last().copied().unwrap_or(0.0)
    }

    /// `f(0) = sup f`.
    pub fn sup(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// Right-continuous value at `t ≥ 0`.
    pub fn evaluate(&self, t: f64) -> f64 {
        let i = self.breakpoints.partition_point(|&b| b <= t);
        self.values.get(i).copied().unwrap_or(0.0)
    }

    /// `t ↦ f(t / c)`.
    pub fn dilate(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Contract(format!("dilation factor must be positive, got {c}")));
        }
        Ok(StepFunction {
            breakpoints: self.breakpoints.iter().map(|t| t * c).collect(),
            values: self.values.clone(),
        })
    }

    /// `c · f`.
    pub fn scale(&self, c: f64) -> Self {
        if c == 0.0 {
            return Self::zero();
        }
        StepFunction {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| v * c.abs()).collect(),
        }
    }

    /// Pointwise product on the merged breakpoint set.
    pub fn product(&self, other: &StepFunction) -> Self {
        let end = self.support().min(other.support());
        let mut bps = Vec::new();
        let mut vals = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.len() && j < other.len() {
            let (a, b) = (self.breakpoints[i], other.breakpoints[j]);
            let t = a.min(b);
            if t > end {
                break;
            }
            bps.push(t);
            vals.push(self.values[i] * other.values[j]);
            if a <= t {
                i += 1;
            }
            if b <= t {
                j += 1;
            }
        }
        Self::merged(bps, vals, 0.0)
    }

    /// Constancy intervals `(t_left, t_right, value)`.
    pub fn intervals(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let lefts = std::iter::once(0.0).chain(self.breakpoints.iter().copied());
        lefts
            .zip(self.breakpoints.iter().copied())
            .zip(self.values.iter().copied())
            .map(|((l, r), v)| (l, r, v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> StepFunction {
        StepFunction::new(vec![1.0, 2.0], vec![3.0, 1.0]).unwrap()
    }

    #[test]
    fn evaluate_is_right_continuous() {
        let f = f();
        assert_eq!(f.evaluate(0.0), 3.0);
        assert_eq!(f.evaluate(0.999), 3.0);
        assert_eq!(f.evaluate(1.0), 1.0);
        assert_eq!(f.evaluate(2.0), 0.0);
        assert_eq!(f.evaluate(10.0), 0.0);
    }

    #[test]
    fn square() {
        let g = f().product(&f());
        assert_eq!(g.breakpoints(), &[1.0, 2.0]);
        assert_eq!(g.values(), &[9.0, 1.0]);
    }

    #[test]
    fn product_with_unit_indicator() {
        let one = StepFunction::indicator(1.0, 2.0).unwrap();
        assert_eq!(f().product(&one), f());
    }

    #[test]
    fn product_truncates_to_shorter_support() {
        let short = StepFunction::indicator(2.0, 1.5).unwrap();
        let g = f().product(&short);
        assert_eq!(g.breakpoints(), &[1.0, 1.5]);
        assert_eq!(g.values(), &[6.0, 2.0]);
    }

    #[test]
    fn product_merges_equal_values() {
        let a = StepFunction::new(vec![1.0, 2.0], vec![2.0, 1.0]).unwrap();
        let b = StepFunction::new(vec![1.0, 2.0], vec![1.0, 0.5]).unwrap();
        let ab = a.product(&StepFunction::new(vec![1.0, 2.0], vec![1.0, 2.0 - 1.0]).unwrap());
        assert_eq!(ab, a);
        assert_eq!(a.product(&b).values(), &[2.0, 0.5]);
    }

    #[test]
    fn dilate_moves_breakpoints() {
        let g = f().dilate(2.0).unwrap();
        for t in [0.0, 0.3, 0.9, 1.0, 1.5, 1.99, 2.5] {
            assert_eq!(g.evaluate(2.0 * t), f().evaluate(t));
        }
        assert!(f().dilate(0.0).is_err());
    }

    #[test]
    fn weighted_values_merge() {
        let s = StepFunction::from_weighted_values(&[(5.0, 0.5), (2.0, 2.0), (2.0 * (1.0 - 1e-14), 2.0)]);
        assert_eq!(s.breakpoints(), &[0.5, 4.5]);
        assert_eq!(s.values(), &[5.0, 2.0]);
    }

    #[test]
    fn invalid_inputs() {
        assert!(StepFunction::new(vec![1.0, 1.0], vec![2.0, 1.0]).is_err());
        assert!(StepFunction::new(vec![1.0, 2.0], vec![1.0, 2.0]).is_err());
        assert!(StepFunction::new(vec![1.0], vec![0.0]).is_err());
        assert!(StepFunction::new(vec![0.0], vec![1.0]).is_err());
    }

    #[test]
    fn intervals_listing() {
        let rows: Vec<_> = f().intervals().collect();
        assert_eq!(rows, vec![(0.0, 1.0, 3.0), (1.0, 2.0, 1.0)]);
    }
}
