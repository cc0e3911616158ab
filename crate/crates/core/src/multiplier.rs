//! Fourier multipliers `A_σ x = F̂(σ · F[x])` and the inequalities around them.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{Ensemble, Operator};
use crate::error::{Error, Result};
use crate::fourier::{Direction, FourierStructure};
use crate::lorentz::{conjugate, embedding_constant, lorentz_norm, lp_norm, step_lorentz_norm, HormanderExponents};
use crate::singular::singular_function;

/// A symbol `σ` in the dual algebra `M̂` of a structure.
#[derive(Debug, Clone)]
pub struct MultiplierSymbol {
    symbol: Operator,
}

impl MultiplierSymbol {
    pub fn new(fs: &FourierStructure, symbol: Operator) -> Result<Self> {
        if !symbol.same_algebra(&Operator::zeros(fs.m_hat().clone())) {
            return Err(Error::Structural(format!(
                "symbol lives in {}, expected {}",
                symbol.algebra(),
                fs.m_hat()
            )));
        }
        Ok(MultiplierSymbol { symbol })
    }

    pub fn identity(fs: &FourierStructure) -> Self {
        MultiplierSymbol {
            symbol: Operator::identity(fs.m_hat().clone()),
        }
    }

    pub fn random(fs: &FourierStructure, seed: u64) -> Self {
        MultiplierSymbol {
            symbol: Operator::random(fs.m_hat().clone(), seed, Ensemble::GeneralComplex),
        }
    }

    pub fn symbol(&self) -> &Operator {
        &self.symbol
    }

    pub fn scale(&self, c: Complex64) -> Self {
        MultiplierSymbol {
            symbol: self.symbol.scale(c),
        }
    }
}

pub fn apply_multiplier(fs: &FourierStructure, sigma: &MultiplierSymbol, x: &Operator) -> Result<Operator> {
    fs.inverse(&sigma.symbol.multiply(&fs.forward(x)?)?)
}

/// Matrix of `A_σ` on the flattened coordinates of `M` (see [`Operator::to_flat`]).
pub fn multiplier_matrix(fs: &FourierStructure, sigma: &MultiplierSymbol) -> Result<DMatrix<Complex64>> {
    let n = fs.m().dimension();
    let mut a = DMatrix::zeros(n, n);
    let mut e = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        e[j] = Complex64::new(1.0, 0.0);
        let col = apply_multiplier(fs, sigma, &Operator::from_flat(fs.m().clone(), &e)?)?.to_flat();
        for (i, v) in col.into_iter().enumerate() {
            a[(i, j)] = v;
        }
        e[j] = Complex64::new(0.0, 0.0);
    }
    Ok(a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HyMode {
    /// `‖F[x]‖_{p′,p} ≲ ‖x‖_p`.
    Forward,
    /// `‖x‖_{p′} ≲ ‖F[x]‖_{p,p′}`.
    Inverse,
}

/// One side-by-side evaluation of an inequality `lhs ≲ rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

impl Comparison {
    fn new(lhs: f64, rhs: f64) -> Self {
        Comparison {
            lhs,
            rhs,
            ratio: safe_ratio(lhs, rhs),
        }
    }
}

/// `lhs/rhs`, with `0/0 = 0`.
fn safe_ratio(lhs: f64, rhs: f64) -> f64 {
    if rhs == 0.0 {
        if lhs == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        lhs / rhs
    }
}

fn nonzero(x: &Operator, what: &str) -> Result<()> {
    if x.is_zero() {
        Err(Error::Degenerate(format!("{what} is zero")))
    } else {
        Ok(())
    }
}

/// Hausdorff–Young ratio at `1 < p ≤ 2`.
pub fn hy_check(fs: &FourierStructure, x: &Operator, p: f64, mode: HyMode) -> Result<Comparison> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(Error::Contract(format!("Hausdorff-Young needs 1 < p ≤ 2, got {p}")));
    }
    nonzero(x, "x")?;
    let fx = fs.forward(x)?;
    let pc = conjugate(p);
    Ok(match mode {
        HyMode::Forward => Comparison::new(lorentz_norm(&fx, pc, p)?, lp_norm(x, p)?),
        HyMode::Inverse => Comparison::new(lp_norm(x, pc)?, lorentz_norm(&fx, p, pc)?),
    })
}

/// `‖A_σ x‖_q / (‖σ‖_{r,∞} ‖x‖_p)`.
pub fn hormander_ratio(
    fs: &FourierStructure,
    sigma: &MultiplierSymbol,
    x: &Operator,
    e: &HormanderExponents,
) -> Result<f64> {
    nonzero(sigma.symbol(), "σ")?;
    nonzero(x, "x")?;
    let ax = apply_multiplier(fs, sigma, x)?;
    Ok(lp_norm(&ax, e.q)? / (lorentz_norm(sigma.symbol(), e.r, f64::INFINITY)? * lp_norm(x, e.p)?))
}

/// Constants for the two calibrated steps of the chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainCaps {
    /// Inverse Hausdorff–Young at exponent `q′`.
    pub inverse_hy: f64,
    /// Hausdorff–Young at exponent `p`.
    pub hy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainStep {
    pub label: &'static str,
    pub cmp: Comparison,
    pub cap: f64,
}

impl ChainStep {
    pub fn passes(&self, slack: f64) -> bool {
        self.cmp.ratio.is_finite() && self.cmp.ratio <= self.cap * (1.0 + slack)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainReport {
    pub steps: Vec<ChainStep>,
    /// `‖A_σ x‖_q / (‖σ‖_{r,∞} ‖x‖_p)`, which the step ratios multiply out to.
    pub end_to_end: f64,
}

impl ChainReport {
    pub fn product_of_ratios(&self) -> f64 {
        self.steps.iter().map(|s| s.cmp.ratio).product()
    }

    pub fn product_of_caps(&self) -> f64 {
        self.steps.iter().map(|s| s.cap).product()
    }
}

/// The five steps of the multiplier bound:
///
/// ```text
/// (a) ‖A_σx‖_q            ≤ C_a ‖σF[x]‖_{q′,q}
/// (b) ‖σF[x]‖_{q′,q}      ≤ 2^{1/q′} ‖μ(σ)μ(F[x])‖_{q′,q}
/// (c) ‖μ(σ)μ(F[x])‖_{q′,q} ≤ 2^{1/q′} ‖σ‖_{r,∞} ‖F[x]‖_{p′,q}
/// (d) ‖F[x]‖_{p′,q}       ≤ C_d ‖F[x]‖_{p′,p}
/// (e) ‖F[x]‖_{p′,p}       ≤ C_e ‖x‖_p
/// ```
pub fn chain_report(
    fs: &FourierStructure,
    sigma: &MultiplierSymbol,
    x: &Operator,
    e: &HormanderExponents,
    caps: ChainCaps,
) -> Result<ChainReport> {
    nonzero(sigma.symbol(), "σ")?;
    nonzero(x, "x")?;
    let (p, q, pc, qc) = (e.p, e.q, e.p_conj, e.q_conj);
    let fx = fs.forward(x)?;
    let sfx = sigma.symbol().multiply(&fx)?;
    let ax = fs.inverse(&sfx)?;
    let mu_prod = singular_function(sigma.symbol())?.product(&singular_function(&fx)?);

    let ax_q = lp_norm(&ax, q)?;
    let sfx_n = lorentz_norm(&sfx, qc, q)?;
    let prod_n = step_lorentz_norm(&mu_prod, qc, q)?;
    let sigma_weak = lorentz_norm(sigma.symbol(), e.r, f64::INFINITY)?;
    let fx_pcq = lorentz_norm(&fx, pc, q)?;
    let fx_pcp = lorentz_norm(&fx, pc, p)?;
    let x_p = lp_norm(x, p)?;

    let dil = 2f64.powf(1.0 / qc);
    let steps = vec![
        ChainStep { label: "a", cmp: Comparison::new(ax_q, sfx_n), cap: caps.inverse_hy },
        ChainStep { label: "b", cmp: Comparison::new(sfx_n, prod_n), cap: dil },
        ChainStep { label: "c", cmp: Comparison::new(prod_n, sigma_weak * fx_pcq), cap: dil },
        ChainStep { label: "d", cmp: Comparison::new(fx_pcq, fx_pcp), cap: embedding_constant(pc, p, q) },
        ChainStep { label: "e", cmp: Comparison::new(fx_pcp, x_p), cap: caps.hy },
    ];
    Ok(ChainReport {
        steps,
        end_to_end: ax_q / (sigma_weak * x_p),
    })
}

/// `‖y·F[x]‖_p / (‖y‖_{s,∞} ‖x‖_p)` with `1/s = 2/p − 1`.
pub fn paley_ratio(fs: &FourierStructure, y: &Operator, x: &Operator, p: f64) -> Result<f64> {
    let e = HormanderExponents::paley(p)?;
    nonzero(y, "y")?;
    nonzero(x, "x")?;
    let yfx = y.multiply(&fs.forward(x)?)?;
    Ok(lp_norm(&yfx, p)? / (lorentz_norm(y, e.s, f64::INFINITY)? * lp_norm(x, p)?))
}

/// `(π_L(g)x)(h) = x(g⁻¹h)`.
pub fn left_translate(fs: &FourierStructure, x: &Operator, g: usize) -> Result<Operator> {
    let group = fs.group();
    if fs.direction() != Direction::FunctionSide || g >= group.order() {
        return Err(Error::Contract("left translation needs a function-side structure and g in G".into()));
    }
    let ginv = group.inverse(g);
    let values: Vec<Complex64> = (0..group.order()).map(|h| x.value(group.mul(ginv, h))).collect();
    Operator::from_values(x.algebra().clone(), &values)
}

/// `max |A_σ(π_L(g)x) − π_L(g)(A_σ x)|` over `trials` random `x`, divided by
/// `max(1, max |A_σ x|)`. `None` on block-side structures.
pub fn translation_equivariance(
    fs: &FourierStructure,
    sigma: &MultiplierSymbol,
    g: usize,
    trials: usize,
    seed: u64,
) -> Result<Option<f64>> {
    if fs.direction() != Direction::FunctionSide {
        return Ok(None);
    }
    let mut worst = 0.0f64;
    let mut scale = 1.0f64;
    for t in 0..trials as u64 {
        let x = Operator::random(fs.m().clone(), seed.wrapping_add(t), Ensemble::GeneralComplex);
        let ax = apply_multiplier(fs, sigma, &x)?;
        let lhs = apply_multiplier(fs, sigma, &left_translate(fs, &x, g)?)?;
        worst = worst.max(lhs.max_entry_diff(&left_translate(fs, &ax, g)?)?);
        scale = scale.max(ax.max_entry());
    }
    Ok(Some(worst / scale))
}

/// Exact `‖A_σ‖_{p→q}` where it has a closed form.
///
/// * `p = q = 2`: `‖σ‖_∞`, by Plancherel and surjectivity of `F`.
/// * function side, `p = 1`: `max_g ‖A_σ δ_g‖_q`, since point masses are the
///   extreme points of the `ℓ¹` ball.
/// * function side, `q = ∞`: `max_g ‖row_g(A_σ)‖_{p′}`, by duality.
pub fn exact_opnorm_endpoint(fs: &FourierStructure, sigma: &MultiplierSymbol, p: f64, q: f64) -> Result<Option<f64>> {
    if p == 2.0 && q == 2.0 {
        return lp_norm(sigma.symbol(), f64::INFINITY).map(Some);
    }
    if fs.direction() != Direction::FunctionSide || !(p == 1.0 || q.is_infinite()) {
        return Ok(None);
    }
    let a = multiplier_matrix(fs, sigma)?;
    let vec_norm = |v: &mut dyn Iterator<Item = Complex64>, e: f64| -> f64 {
        if e.is_infinite() {
            v.fold(0.0, |m, z| m.max(z.norm()))
        } else {
            v.map(|z| z.norm().powf(e)).sum::<f64>().powf(1.0 / e)
        }
    };
    let best = if p == 1.0 {
        a.column_iter()
            .map(|c| vec_norm(&mut c.iter().copied(), q))
            .fold(0.0, f64::max)
    } else {
        let pc = conjugate(p);
        a.row_iter()
            .map(|r| vec_norm(&mut r.iter().copied(), pc))
            .fold(0.0, f64::max)
    };
    Ok(Some(best))
}
