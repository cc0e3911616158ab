//! Lower bounds on `‖A_σ‖_{p→q}` by multi-start ascent.
//!
//! The parameters are the real and imaginary parts of the flattened entries
//! of `x`. The objective is `log ‖A_σx‖_q − log ‖x‖_p`, whose gradient per
//! block is `w_k y|y|^{e−2} / ‖y‖_e^{e−1}` (polar factor for `e = 1`, top
//! singular pair for `e = ∞`), pulled back through `A_σ^H`. At nonsmooth
//! points the subgradient keeps every nonzero singular direction and the
//! first maximizing pair.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::algebra::Operator;
use crate::error::{Error, Result};
use crate::fourier::FourierStructure;
use crate::lorentz::lp_norm;
use crate::multiplier::{apply_multiplier, multiplier_matrix, MultiplierSymbol};
use crate::report::trial_seed;

const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-14;
const STALL_WINDOW: usize = 10;
const SINGULAR_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateOptions {
    /// Random starts, on top of the structured ones.
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions {
            restarts: 32,
            max_iters: 2000,
            tol: 1e-8,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NormEstimate {
    pub lower_bound: f64,
    pub witness: Operator,
    /// Iterations of the start that produced the witness.
    pub iterations: usize,
    /// Starts run, structured and random.
    pub restarts_used: usize,
    pub converged: bool,
}

/// `x ↦ log ‖Ax‖_q − log ‖x‖_p` on flattened coordinates.
#[derive(Debug, Clone)]
pub struct RatioObjective {
    a: DMatrix<Complex64>,
    blocks: Vec<(usize, f64, usize)>,
    p: f64,
    q: f64,
}

impl RatioObjective {
    pub fn new(fs: &FourierStructure, sigma: &MultiplierSymbol, p: f64, q: f64) -> Result<Self> {
        for e in [p, q] {
            if !(e >= 1.0) {
                return Err(Error::Contract(format!("exponents must lie in [1, ∞], got {e}")));
            }
        }
        let mut offset = 0;
        let blocks = fs
            .m()
            .blocks()
            .iter()
            .map(|b| {
                let r = (b.dim, b.weight, offset);
                offset += b.dim * b.dim;
                r
            })
            .collect();
        Ok(RatioObjective {
            a: multiplier_matrix(fs, sigma)?,
            blocks,
            p,
            q,
        })
    }

    pub fn dimension(&self) -> usize {
        self.a.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.a
    }

    fn norm(&self, v: &DVector<Complex64>, e: f64) -> f64 {
        let mut acc = 0.0f64;
        for &(d, w, off) in &self.blocks {
            let s = block_singular_values(v, d, off);
            if e.is_infinite() {
                acc = acc.max(s.iter().copied().fold(0.0, f64::max));
            } else {
                acc += w * s.iter().map(|x| x.powf(e)).sum::<f64>();
            }
        }
        if e.is_infinite() {
            acc
        } else {
            acc.powf(1.0 / e)
        }
    }

    /// `(‖v‖_e, ∇‖v‖_e)` with the gradient paired by `Re Σ conj(g_i) dv_i`.
    fn norm_grad(&self, v: &DVector<Complex64>, e: f64) -> (f64, DVector<Complex64>) {
        let mut g = DVector::zeros(v.len());
        let n = self.norm(v, e);
        if n == 0.0 {
            return (0.0, g);
        }
        if e.is_infinite() {
            let mut best: Option<(f64, usize)> = None;
            for (k, &(d, _, off)) in self.blocks.iter().enumerate() {
                let top = block_singular_values(v, d, off).into_iter().fold(0.0, f64::max);
                if best.is_none_or(|(b, _)| top > b) {
                    best = Some((top, k));
                }
            }
            let (_, k) = best.unwrap();
            let (d, _, off) = self.blocks[k];
            let m = block_matrix(v, d, off);
            let svd = m.svd(true, true);
            let (u, vt) = (svd.u.unwrap(), svd.v_t.unwrap());
            let i = argmax(svd.singular_values.as_slice());
            let gm = u.column(i) * vt.row(i);
            write_block(&mut g, &gm, d, off);
            return (n, g);
        }
        let scale = n.powf(e - 1.0);
        for &(d, w, off) in &self.blocks {
            let gm = if d == 1 {
                let z = v[off];
                let r = z.norm();
                let m = if r > 0.0 { z * (r.powf(e - 2.0)) } else { Complex64::new(0.0, 0.0) };
                DMatrix::from_element(1, 1, m)
            } else {
                let svd = block_matrix(v, d, off).svd(true, true);
                let (u, vt) = (svd.u.unwrap(), svd.v_t.unwrap());
                let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
                let mut gm = DMatrix::zeros(d, d);
                for (i, &s) in svd.singular_values.iter().enumerate() {
                    if s > SINGULAR_FLOOR * smax {
                        gm += u.column(i) * vt.row(i) * Complex64::new(s.powf(e - 1.0), 0.0);
                    }
                }
                gm
            };
            write_block(&mut g, &(gm * Complex64::new(w / scale, 0.0)), d, off);
        }
        (n, g)
    }

    pub fn value(&self, x: &[Complex64]) -> f64 {
        let x = DVector::from_column_slice(x);
        (self.norm(&(&self.a * &x), self.q) / self.norm(&x, self.p)).ln()
    }

    /// Objective and its gradient.
    pub fn value_and_gradient(&self, x: &[Complex64]) -> (f64, Vec<Complex64>) {
        let xv = DVector::from_column_slice(x);
        let y = &self.a * &xv;
        let (ny, gy) = self.norm_grad(&y, self.q);
        let (nx, gx) = self.norm_grad(&xv, self.p);
        let g = self.a.adjoint() * gy / Complex64::new(ny, 0.0) - gx / Complex64::new(nx, 0.0);
        ((ny / nx).ln(), g.iter().copied().collect())
    }
}

fn argmax(s: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in s.iter().enumerate() {
        if v > s[best] {
            best = i;
        }
    }
    best
}

fn block_matrix(v: &DVector<Complex64>, d: usize, off: usize) -> DMatrix<Complex64> {
    DMatrix::from_column_slice(d, d, &v.as_slice()[off..off + d * d])
}

fn write_block(g: &mut DVector<Complex64>, m: &DMatrix<Complex64>, d: usize, off: usize) {
    g.as_mut_slice()[off..off + d * d].copy_from_slice(m.as_slice());
}

fn block_singular_values(v: &DVector<Complex64>, d: usize, off: usize) -> Vec<f64> {
    if d == 1 {
        vec![v[off].norm()]
    } else {
        block_matrix(v, d, off).singular_values().iter().copied().collect()
    }
}

struct Ascent {
    x: Vec<Complex64>,
    value: f64,
    iterations: usize,
    converged: bool,
}

fn ascend(obj: &RatioObjective, start: Vec<Complex64>, opts: &EstimateOptions) -> Option<Ascent> {
    let mut x = start;
    let mut step: f64 = 1.0;
    let mut quiet = 0;
    let (mut f, mut g) = obj.value_and_gradient(&x);
    if !f.is_finite() {
        return None;
    }
    for it in 0..opts.max_iters {
        let gn2: f64 = g.iter().map(|z| z.norm_sqr()).sum();
        if gn2 == 0.0 {
            return Some(Ascent { x, value: f, iterations: it, converged: true });
        }
        let mut t = (step * 2.0).min(1e6);
        let accepted = loop {
            let trial: Vec<Complex64> = x.iter().zip(&g).map(|(a, b)| a + b * t).collect();
            let ft = obj.value(&trial);
            if ft.is_finite() && ft >= f + ARMIJO * t * gn2 {
                break Some((trial, ft));
            }
            t *= 0.5;
            if t < MIN_STEP {
                break None;
            }
        };
        let Some((trial, ft)) = accepted else {
            // No ascent direction at this resolution.
            return Some(Ascent { x, value: f, iterations: it, converged: true });
        };
        step = t;
        let change = (ft - f).abs();
        let xn = normalize(obj, trial);
        (f, g) = obj.value_and_gradient(&xn);
        x = xn;
        if change <= opts.tol {
            quiet += 1;
            if quiet >= STALL_WINDOW {
                return Some(Ascent { x, value: f, iterations: it + 1, converged: true });
            }
        } else {
            quiet = 0;
        }
    }
    Some(Ascent { x, value: f, iterations: opts.max_iters, converged: false })
}

/// Rescales to unit `p`-norm, which leaves the objective unchanged.
fn normalize(obj: &RatioObjective, x: Vec<Complex64>) -> Vec<Complex64> {
    let n = obj.norm(&DVector::from_column_slice(&x), obj.p);
    if n > 0.0 && n.is_finite() {
        x.into_iter().map(|z| z / n).collect()
    } else {
        x
    }
}

fn structured_starts(obj: &RatioObjective) -> Vec<Vec<Complex64>> {
    let n = obj.dimension();
    let zero = Complex64::new(0.0, 0.0);
    let mut starts = Vec::new();
    // Coordinate units: point masses and matrix units.
    for j in 0..n {
        let mut e = vec![zero; n];
        e[j] = Complex64::new(1.0, 0.0);
        starts.push(e);
    }
    // Top right singular vector of A in the weighted L² geometry.
    let mut w = vec![0.0; n];
    for &(d, wt, off) in &obj.blocks {
        w[off..off + d * d].fill(wt.sqrt());
    }
    let weighted = DMatrix::from_fn(n, n, |i, j| obj.a[(i, j)] * (w[i] / w[j]));
    let svd = weighted.svd(false, true);
    let vt = svd.v_t.unwrap();
    let i = argmax(svd.singular_values.as_slice());
    starts.push((0..n).map(|j| vt[(i, j)].conj() / w[j]).collect());
    // Duals of the rows of A under the coordinate pairing.
    if obj.p > 1.0 {
        let pc = if obj.p.is_infinite() { 1.0 } else { obj.p / (obj.p - 1.0) };
        for r in obj.a.row_iter() {
            let x: Vec<Complex64> = r
                .iter()
                .map(|a| {
                    let m = a.norm();
                    if m == 0.0 {
                        zero
                    } else {
                        a.conj() * m.powf(pc - 2.0)
                    }
                })
                .collect();
            if x.iter().any(|z| z.norm() > 0.0) {
                starts.push(x);
            }
        }
    }
    starts
}

fn random_start(n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im)
        })
        .collect()
}

/// Lower bound on `sup_{x≠0} ‖A_σx‖_q / ‖x‖_p` for `1 ≤ p, q ≤ ∞`.
pub fn estimate_opnorm(
    fs: &FourierStructure,
    sigma: &MultiplierSymbol,
    p: f64,
    q: f64,
    opts: &EstimateOptions,
) -> Result<NormEstimate> {
    let obj = RatioObjective::new(fs, sigma, p, q)?;
    let n = obj.dimension();
    let mut best: Option<Ascent> = None;
    let mut used = 0;
    let mut consider = |a: Option<Ascent>| {
        if let Some(a) = a {
            if best.as_ref().is_none_or(|b| a.value > b.value) {
                best = Some(a);
            }
        }
    };
    for s in structured_starts(&obj) {
        used += 1;
        consider(ascend(&obj, s, opts));
    }
    for r in 0..opts.restarts as u64 {
        used += 1;
        let mut attempt = 0;
        loop {
            let seed = trial_seed(opts.seed, "estimate", r * 1000 + attempt);
            if let Some(a) = ascend(&obj, random_start(n, seed), opts) {
                consider(Some(a));
                break;
            }
            attempt += 1;
            if attempt >= 1000 {
                break;
            }
        }
    }
    let best = best.ok_or_else(|| Error::Degenerate("objective is not finite at any start".into()))?;
    let witness = Operator::from_flat(fs.m().clone(), &best.x)?;
    let lower_bound = lp_norm(&apply_multiplier(fs, sigma, &witness)?, q)? / lp_norm(&witness, p)?;
    Ok(NormEstimate {
        lower_bound,
        witness,
        iterations: best.iterations,
        restarts_used: used,
        converged: best.converged,
    })
}
