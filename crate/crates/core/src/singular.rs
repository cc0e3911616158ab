//! Distribution functions and generalized singular value functions of
//! operators in a [`TraceAlgebra`](crate::TraceAlgebra), and the
//! submultiplicativity check `μ(t+s; xy) ≤ μ(t; x)·μ(s; y)`.

use crate::algebra::Operator;
use crate::error::{Error, Result};
use crate::step::StepFunction;

/// `d(s; |x|)`: total weight of the eigenvalues of `|x|` strictly above `s`.
pub fn distribution(x: &Operator, s: f64) -> Result<f64> {
    Ok(x.singular_pairs()?
        .iter()
        .filter(|&&(v, _)| v > s)
        .map(|&(_, w)| w)
        .sum())
}

/// `μ(·; x)`, the right-continuous inverse of `d(·; |x|)`.
pub fn singular_function(x: &Operator) -> Result<StepFunction> {
    Ok(StepFunction::from_weighted_values(&x.singular_pairs()?))
}

/// Relative distance under which two breakpoints are considered the same point.
pub const BREAKPOINT_SNAP: f64 = 1e-12;

/// Result of [`check_submultiplicative`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubmultiplicativeCheck {
    /// Largest `μ(t+s; xy) − μ(t; x)·μ(s; y)` over the corner grid; `≤ 0` passes.
    pub max_violation: f64,
    /// The corner `(t, s)` attaining it (first in grid order).
    pub witness: (f64, f64),
    /// `μ(0; x)·μ(0; y)`, the natural scale of both sides.
    pub scale: f64,
}

impl SubmultiplicativeCheck {
    pub fn passes(&self, rel_tol: f64) -> bool {
        self.max_violation <= rel_tol * self.scale
    }
}

/// Checks `μ(t+s; xy) ≤ μ(t; x)·μ(s; y)` for all `t, s ≥ 0`.
///
/// The right side is constant on each cell `[t_{i-1}, t_i) × [s_{j-1}, s_j)`
/// of the product partition induced by the breakpoints of `μ(x)` and `μ(y)`
/// (including the unbounded cells past the last breakpoints, where it is 0).
/// The left side depends on `t + s` only and is nonincreasing, so on each
/// cell it is largest at the lower-left corner. Evaluating every corner
/// `(t, s)` with `t ∈ {0} ∪ bp(μ(x))`, `s ∈ {0} ∪ bp(μ(y))` is therefore
/// exhaustive.
///
/// Breakpoints are cumulative sums of block weights, so the same point can
/// arrive as `4.9` on one side and `4.8999999999999995` on the other. The
/// left side is read at `t + s` nudged right by `BREAKPOINT_SNAP` times the
/// support length.
pub fn check_submultiplicative(x: &Operator, y: &Operator) -> Result<SubmultiplicativeCheck> {
    if !x.same_algebra(y) {
        return Err(Error::Structural("submultiplicativity needs a common algebra".into()));
    }
    let mx = singular_function(x)?;
    let my = singular_function(y)?;
    let mxy = singular_function(&x.multiply(y)?)?;

    let ts: Vec<f64> = std::iter::once(0.0).chain(mx.breakpoints().iter().copied()).collect();
    let ss: Vec<f64> = std::iter::once(0.0).chain(my.breakpoints().iter().copied()).collect();

    let mut best = SubmultiplicativeCheck {
        max_violation: f64::NEG_INFINITY,
        witness: (0.0, 0.0),
        scale: mx.sup() * my.sup(),
    };
    let nudge = BREAKPOINT_SNAP * mx.support().max(my.support());
    for &t in &ts {
        let rx = mx.evaluate(t);
        for &s in &ss {
            let gap = mxy.evaluate(t + s + nudge) - rx * my.evaluate(s);
            if gap > best.max_violation {
                best.max_violation = gap;
                best.witness = (t, s);
            }
        }
    }
    Ok(best)
}
