//! Noncommutative `L^p` norms and Lorentz `L^{p,q}` quasinorms, evaluated in
//! closed form on the step-function representation of `μ(·; x)`.
//!
//! For `q < ∞`,
//!
//! ```text
//! ‖f‖_{p,q}^q = ∫ (t^{1/p} f(t))^q dt/t = Σ_i v_i^q · (p/q) · (t_i^{q/p} − t_{i−1}^{q/p})
//! ```
//!
//! and for `q = ∞` the supremum of `t^{1/p} f(t)` over `[t_{i−1}, t_i)` is the
//! left limit `v_i · t_i^{1/p}` at the right endpoint.

use crate::algebra::Operator;
use crate::error::{Error, Result};
use crate::singular::singular_function;
use crate::step::StepFunction;

/// Hölder conjugate `p/(p−1)`, with `1 ↔ ∞`.
pub fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// `1/x` with `1/0 = ∞` and `1/∞ = 0`.
fn recip(x: f64) -> f64 {
    if x == 0.0 {
        f64::INFINITY
    } else {
        1.0 / x
    }
}

/// Exponent bundle for the multiplier theorem and the Paley inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HormanderExponents {
    pub p: f64,
    pub q: f64,
    pub p_conj: f64,
    pub q_conj: f64,
    /// `1/r = 1/p − 1/q`; `∞` when `p = q`.
    pub r: f64,
    /// `1/s = 2/p − 1`; `∞` when `p = 2`.
    pub s: f64,
}

impl HormanderExponents {
    /// Requires `1 < p ≤ 2 ≤ q < ∞`.
    pub fn hormander(p: f64, q: f64) -> Result<Self> {
        if !(p > 1.0 && p <= 2.0 && q >= 2.0 && q.is_finite()) {
            return Err(Error::Contract(format!("need 1 < p ≤ 2 ≤ q < ∞, got p = {p}, q = {q}")));
        }
        Ok(Self::build(p, q))
    }

    /// Requires `1 < p ≤ 2`; `q` is set to `p′`.
    pub fn paley(p: f64) -> Result<Self> {
        if !(p > 1.0 && p <= 2.0) {
            return Err(Error::Contract(format!("need 1 < p ≤ 2, got p = {p}")));
        }
        Ok(Self::build(p, conjugate(p)))
    }

    fn build(p: f64, q: f64) -> Self {
        let r = if p == q { f64::INFINITY } else { recip(1.0 / p - 1.0 / q) };
        let s = if p == 2.0 { f64::INFINITY } else { recip(2.0 / p - 1.0) };
        HormanderExponents {
            p,
            q,
            p_conj: conjugate(p),
            q_conj: conjugate(q),
            r,
            s,
        }
    }
}

/// `(Σ_i v_i^p (t_i − t_{i−1}))^{1/p}`, or `sup f` for `p = ∞`.
pub fn step_lp_norm(f: &StepFunction, p: f64) -> Result<f64> {
    check_positive("p", p)?;
    if p.is_infinite() {
        return Ok(f.sup());
    }
    let sum: f64 = f.intervals().map(|(l, r, v)| v.powf(p) * (r - l)).sum();
    Ok(sum.powf(1.0 / p))
}

/// `‖x‖_p = τ(|x|^p)^{1/p}`; `p = ∞` gives the operator norm `μ(0; x)`.
pub fn lp_norm(x: &Operator, p: f64) -> Result<f64> {
    check_positive("p", p)?;
    let pairs = x.singular_pairs()?;
    if p.is_infinite() {
        return Ok(pairs.first().map_or(0.0, |&(v, _)| v));
    }
    let sum: f64 = pairs.iter().map(|&(v, w)| w * v.powf(p)).sum();
    Ok(sum.powf(1.0 / p))
}

/// `‖f‖_{L^{p,q}(ℝ₊)}` for `0 < p < ∞`, `0 < q ≤ ∞`; `(∞, ∞)` is `sup f`.
pub fn step_lorentz_norm(f: &StepFunction, p: f64, q: f64) -> Result<f64> {
    check_positive("p", p)?;
    check_positive("q", q)?;
    if p.is_infinite() {
        if q.is_infinite() {
            return Ok(f.sup());
        }
        return Err(Error::Contract(format!("L^{{∞,{q}}} is degenerate; only q = ∞ is allowed")));
    }
    if q.is_infinite() {
        return Ok(f
            .intervals()
            .map(|(_, r, v)| v * r.powf(1.0 / p))
            .fold(0.0, f64::max));
    }
    let a = q / p;
    let sum: f64 = f
        .intervals()
        .map(|(l, r, v)| v.powf(q) * (p / q) * (r.powf(a) - l.powf(a)))
        .sum();
    Ok(sum.powf(1.0 / q))
}

/// `‖x‖_{L^{p,q}(M)} = ‖μ(x)‖_{L^{p,q}(ℝ₊)}`.
pub fn lorentz_norm(x: &Operator, p: f64, q: f64) -> Result<f64> {
    check_positive("p", p)?;
    check_positive("q", q)?;
    step_lorentz_norm(&singular_function(x)?, p, q)
}

/// `sup_λ λ · d(λ; |x|)^{1/r}`, read off the eigenvalues directly.
///
/// The supremum over `λ` of the right-continuous distribution is approached
/// from below at each eigenvalue, so each candidate counts everything at or
/// above `λ(1 − 1e−12)`.
pub fn weak_norm_via_distribution(x: &Operator, r: f64) -> Result<f64> {
    check_positive("r", r)?;
    if r.is_infinite() {
        return Err(Error::Contract("weak norm needs r < ∞".into()));
    }
    let pairs = x.singular_pairs()?;
    let mut best = 0.0f64;
    for &(lambda, _) in &pairs {
        let cut = lambda * (1.0 - 1e-12);
        let d: f64 = pairs.iter().filter(|&&(v, _)| v > cut).map(|&(_, w)| w).sum();
        best = best.max(lambda * d.powf(1.0 / r));
    }
    Ok(best)
}

/// Outcome of [`check_embedding`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbeddingCheck {
    /// `‖x‖_{p,rr} / ‖x‖_{p,q}`, or 0 for the zero operator.
    pub ratio: f64,
    pub pass: bool,
    pub degenerate: bool,
}

/// Sharp constant of `‖f‖_{p,rr} ≤ C ‖f‖_{p,q}` on nonincreasing functions.
///
/// Writing `φ = f^q` as a superposition of indicators `1_{[0,a)}` and applying
/// Minkowski in `L^{rr/q}` shows the ratio is maximized by a single indicator,
/// where it equals `(p/rr)^{1/rr} / (p/q)^{1/q}` independently of the length.
pub fn embedding_constant(p: f64, q: f64, rr: f64) -> f64 {
    let term = |e: f64| if e.is_infinite() { 1.0 } else { (p / e).powf(1.0 / e) };
    term(rr) / term(q)
}

/// Ratio `‖x‖_{p,rr} / ‖x‖_{p,q}` against `cap`, for `1 ≤ p < ∞`, `1 ≤ q ≤ rr ≤ ∞`.
pub fn check_embedding(x: &Operator, p: f64, q: f64, rr: f64, cap: f64) -> Result<EmbeddingCheck> {
    if !(p >= 1.0 && p.is_finite() && q >= 1.0 && q <= rr) {
        return Err(Error::Contract(format!(
            "embedding needs 1 ≤ p < ∞ and 1 ≤ q ≤ rr ≤ ∞, got p = {p}, q = {q}, rr = {rr}"
        )));
    }
    let mu = singular_function(x)?;
    let num = step_lorentz_norm(&mu, p, rr)?;
    let den = step_lorentz_norm(&mu, p, q)?;
    if den == 0.0 {
        if num != 0.0 {
            return Err(Error::Numerical {
                block: 0,
                msg: "nonzero L^{p,rr} norm with zero L^{p,q} norm".into(),
            });
        }
        return Ok(EmbeddingCheck {
            ratio: 0.0,
            pass: true,
            degenerate: true,
        });
    }
    let ratio = num / den;
    Ok(EmbeddingCheck {
        ratio,
        pass: ratio <= cap,
        degenerate: false,
    })
}

/// Outcome of [`check_holder`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// `‖xy‖_{p,q} ≤ 2^{1/p} ‖x‖_{p0,∞} ‖y‖_{p1,q}` with `1/p = 1/p0 + 1/p1`.
pub fn check_holder(x: &Operator, y: &Operator, p0: f64, p1: f64, q: f64) -> Result<HolderCheck> {
    for (name, v) in [("p0", p0), ("p1", p1), ("q", q)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Contract(format!("{name} must be in (0, ∞), got {v}")));
        }
    }
    let xy = x.multiply(y)?;
    let p = 1.0 / (1.0 / p0 + 1.0 / p1);
    let lhs = lorentz_norm(&xy, p, q)?;
    let rhs = 2f64.powf(1.0 / p) * lorentz_norm(x, p0, f64::INFINITY)? * lorentz_norm(y, p1, q)?;
    Ok(HolderCheck {
        lhs,
        rhs,
        pass: lhs <= rhs * (1.0 + 1e-10),
    })
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && !v.is_nan() {
        Ok(())
    } else {
        Err(Error::Contract(format!("{name} must be positive, got {v}")))
    }
}
