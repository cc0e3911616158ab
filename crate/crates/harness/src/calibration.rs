//! Calibrated caps for the inequalities whose constants are not known in
//! closed form, and the sweep that produces them.
//!
//! The sweep runs over cyclic(2) and cyclic(3) in both directions. Inputs are
//! every vector over the grid `{0} ∪ {½, 1, 2} × {e^{iπk/3}, ±i}` whose first
//! nonzero entry is 1 (all ratios are scale invariant), plus random
//! general-complex draws. Seeded hill climbs then push every ratio towards
//! its local maximum. Each cap is the largest ratio seen.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use ncfourier::fourier::{Direction, FourierStructure};
use ncfourier::group::{build_group, GroupKind};
use ncfourier::lorentz::{lorentz_norm, lp_norm, HormanderExponents};
use ncfourier::multiplier::{hy_check, HyMode};
use ncfourier::report::trial_seed;
use ncfourier::{Ensemble, Operator};

use crate::error::HarnessError;

pub const BUILTIN_CAPS: &str = include_str!("../calibration/caps.ini");

pub const HY_EXPONENTS: [f64; 6] = [1.2, 1.25, 4.0 / 3.0, 1.5, 1.8, 2.0];
pub const HORMANDER_P: [f64; 3] = [1.25, 1.5, 2.0];
pub const HORMANDER_Q: [f64; 3] = [2.0, 3.0, 4.0];
pub const PALEY_EXPONENTS: [f64; 2] = [1.25, 1.5];

pub fn hy_key(mode: HyMode, p: f64) -> String {
    let m = match mode {
        HyMode::Forward => "forward",
        HyMode::Inverse => "inverse",
    };
    format!("hy.{m}.p{p:.4}")
}

pub fn hormander_key(p: f64, q: f64) -> String {
    format!("hormander.p{p:.4}.q{q:.4}")
}

pub fn paley_key(p: f64) -> String {
    format!("paley.p{p:.4}")
}

/// A cap together with its provenance tag.
#[derive(Debug, Clone, PartialEq)]
pub struct CapRef {
    pub value: f64,
    pub id: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Caps {
    id: String,
    meta: BTreeMap<String, String>,
    values: BTreeMap<String, f64>,
    overrides: BTreeMap<String, f64>,
}

fn fnv64(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

impl Caps {
    pub fn builtin() -> Self {
        Caps::parse(BUILTIN_CAPS, "caps.ini").expect("shipped calibration parses")
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Usage(format!("cannot read calibration {}: {e}", path.display())))?;
        let name = path.file_name().map_or("calibration".into(), |n| n.to_string_lossy().into_owned());
        Caps::parse(&text, &name)
    }

    pub fn parse(text: &str, name: &str) -> Result<Self, HarnessError> {
        let mut section = String::new();
        let mut meta = BTreeMap::new();
        let mut values = BTreeMap::new();
        let mut canon = String::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(s) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                section = s.trim().to_string();
                if section != "calibration" && section != "caps" {
                    return Err(HarnessError::parse(i + 1, format!("unknown section [{section}] in {name}")));
                }
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| HarnessError::parse(i + 1, format!("expected key = value in {name}")))?;
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            match section.as_str() {
                "calibration" => {
                    meta.insert(k, v);
                }
                "caps" => {
                    let x: f64 = v
                        .parse()
                        .map_err(|_| HarnessError::parse(i + 1, format!("cap '{v}' is not a number")))?;
                    canon.push_str(&format!("{k}={v}\n"));
                    values.insert(k, x);
                }
                _ => return Err(HarnessError::parse(i + 1, format!("entry outside a section in {name}"))),
            }
        }
        Ok(Caps {
            id: format!("{name}@{:016x}", fnv64(&canon)),
            meta,
            values,
            overrides: BTreeMap::new(),
        })
    }

    pub fn from_values(values: BTreeMap<String, f64>, meta: BTreeMap<String, String>) -> Self {
        let text = render(&values, &meta);
        Caps::parse(&text, "caps.ini").expect("rendered calibration parses")
    }

    pub fn with_overrides(mut self, overrides: &BTreeMap<String, f64>) -> Self {
        self.overrides.extend(overrides.iter().map(|(k, v)| (k.clone(), *v)));
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn values(&self) -> &BTreeMap<String, f64> {
        &self.values
    }

    pub fn get(&self, key: &str) -> Result<CapRef, HarnessError> {
        if let Some(&v) = self.overrides.get(key) {
            return Ok(CapRef { value: v, id: format!("config[caps].{key}") });
        }
        self.values
            .get(key)
            .map(|&v| CapRef { value: v, id: format!("{}#{key}", self.id) })
            .ok_or_else(|| {
                HarnessError::Usage(format!("no calibrated cap '{key}'; add it under [caps] or rerun `ncfourier calibrate`"))
            })
    }

    /// A cap that is fixed by a theorem rather than calibrated; config overrides still apply.
    pub fn exact(&self, key: &str, value: f64, why: &str) -> CapRef {
        match self.overrides.get(key) {
            Some(&v) => CapRef { value: v, id: format!("config[caps].{key}") },
            None => CapRef { value, id: format!("exact:{why}") },
        }
    }

    pub fn to_ini(&self) -> String {
        render(&self.values, &self.meta)
    }
}

fn render(values: &BTreeMap<String, f64>, meta: &BTreeMap<String, String>) -> String {
    let mut s = String::from(
        "# Acceptance caps: the largest ratio seen in the cyclic(2)/cyclic(3) sweep.\n\
         # Regenerate with\n\
         #   cargo run --release -p ncfourier-harness -- calibrate --out crates/harness/calibration/caps.ini\n\n\
         [calibration]\n",
    );
    for (k, v) in meta {
        s.push_str(&format!("{k} = {v}\n"));
    }
    s.push_str("\n[caps]\n");
    for (k, v) in values {
        s.push_str(&format!("{k} = {v:e}\n"));
    }
    s
}

pub fn grid_values() -> Vec<Complex64> {
    let mut g = vec![Complex64::new(0.0, 0.0)];
    for m in [0.5, 1.0, 2.0] {
        for k in 0..6 {
            g.push(Complex64::from_polar(m, std::f64::consts::PI * k as f64 / 3.0));
        }
        g.push(Complex64::new(0.0, m));
        g.push(Complex64::new(0.0, -m));
    }
    g
}

/// Every grid vector of length `n` whose first nonzero entry is 1.
pub fn grid_vectors(n: usize, grid: &[Complex64]) -> Vec<Vec<Complex64>> {
    let zero = Complex64::new(0.0, 0.0);
    let mut out = Vec::new();
    for lead in 0..n {
        let free = (n - lead - 1) as u32;
        for code in 0..grid.len().pow(free) {
            let mut v = vec![zero; n];
            v[lead] = Complex64::new(1.0, 0.0);
            let mut c = code;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = grid[c % grid.len()];
                c /= grid.len();
            }
            out.push(v);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub seed: u64,
    /// Random draws (or random pairs) per structure, on top of the grid.
    pub random: usize,
    /// Restricts the grid to `{0, ±1, ±i}`; for quick checks only.
    pub coarse: bool,
    /// Hill climbs per (structure, key).
    pub climbs: usize,
    /// Objective evaluations per climb.
    pub climb_evals: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { seed: 20240601, random: 1000, coarse: false, climbs: 16, climb_evals: 1500 }
    }
}

#[derive(Debug, Clone, Copy)]
enum Target {
    Hy(HyMode, f64),
    Hormander(f64, f64),
    Paley(f64),
}

impl Target {
    fn all() -> Vec<Target> {
        let mut v = Vec::new();
        for &p in &HY_EXPONENTS {
            v.push(Target::Hy(HyMode::Forward, p));
            v.push(Target::Hy(HyMode::Inverse, p));
        }
        for &p in &HORMANDER_P {
            for &q in &HORMANDER_Q {
                v.push(Target::Hormander(p, q));
            }
        }
        v.extend(PALEY_EXPONENTS.iter().map(|&p| Target::Paley(p)));
        v
    }

    fn key(&self) -> String {
        match *self {
            Target::Hy(mode, p) => hy_key(mode, p),
            Target::Hormander(p, q) => hormander_key(p, q),
            Target::Paley(p) => paley_key(p),
        }
    }

    /// Length of the parameter vector: `x`, then the symbol if there is one.
    fn len(&self, fs: &FourierStructure) -> usize {
        match self {
            Target::Hy(..) => fs.m().dimension(),
            _ => fs.m().dimension() + fs.m_hat().dimension(),
        }
    }

    fn eval(&self, fs: &FourierStructure, v: &[Complex64]) -> ncfourier::Result<f64> {
        let n = fs.m().dimension();
        let x = Operator::from_flat(fs.m().clone(), &v[..n])?;
        match *self {
            Target::Hy(mode, p) => Ok(hy_check(fs, &x, p, mode)?.ratio),
            Target::Hormander(p, q) => {
                let s = Operator::from_flat(fs.m_hat().clone(), &v[n..])?;
                let e = HormanderExponents::hormander(p, q)?;
                let ax = fs.inverse(&s.multiply(&fs.forward(&x)?)?)?;
                Ok(lp_norm(&ax, q)? / (lorentz_norm(&s, e.r, f64::INFINITY)? * lp_norm(&x, p)?))
            }
            Target::Paley(p) => {
                let y = Operator::from_flat(fs.m_hat().clone(), &v[n..])?;
                ncfourier::multiplier::paley_ratio(fs, &y, &x, p)
            }
        }
    }
}

/// (1+1) hill climb with a multiplicative step rule, from a seeded Gaussian start.
fn climb(fs: &FourierStructure, target: Target, seed: u64, evals: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = target.len(fs);
    let gauss = |rng: &mut ChaCha8Rng| -> Vec<Complex64> {
        (0..n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect()
    };
    // Errors (a zero input) and NaN never win a comparison.
    let score = |v: &[Complex64]| target.eval(fs, v).ok().filter(|r| !r.is_nan()).unwrap_or(f64::NEG_INFINITY);
    let mut x = gauss(&mut rng);
    let mut best = score(&x);
    let mut step = 0.3;
    for _ in 0..evals {
        let d = gauss(&mut rng);
        let scale = (x.iter().map(|z| z.norm_sqr()).sum::<f64>() / n as f64).sqrt();
        let cand: Vec<Complex64> = x.iter().zip(&d).map(|(a, b)| a + b * (step * scale)).collect();
        let r = score(&cand);
        if r > best {
            best = r;
            x = cand;
            step = (step * 1.5).min(2.0);
        } else {
            step *= 0.9;
        }
        if step < 1e-9 {
            break;
        }
    }
    best
}

struct Prepared {
    x: Operator,
    fx: Operator,
}

fn bump(m: &mut BTreeMap<String, f64>, key: String, v: f64) {
    let e = m.entry(key).or_insert(f64::NEG_INFINITY);
    if v > *e || v.is_nan() {
        *e = v;
    }
}

fn merge(mut a: BTreeMap<String, f64>, b: BTreeMap<String, f64>) -> BTreeMap<String, f64> {
    for (k, v) in b {
        bump(&mut a, k, v);
    }
    a
}

/// Ratios of one (σ or y, x) pair for every Hörmander and Paley key.
fn pair_ratios(fs: &FourierStructure, s: &Operator, x: &Prepared, out: &mut BTreeMap<String, f64>) -> ncfourier::Result<()> {
    let sfx = s.multiply(&x.fx)?;
    let ax = fs.inverse(&sfx)?;
    if !s.is_zero() {
        for &p in &HORMANDER_P {
            let xp = lp_norm(&x.x, p)?;
            for &q in &HORMANDER_Q {
                let e = HormanderExponents::hormander(p, q)?;
                let r = lp_norm(&ax, q)? / (lorentz_norm(s, e.r, f64::INFINITY)? * xp);
                bump(out, hormander_key(p, q), r);
            }
        }
        for &p in &PALEY_EXPONENTS {
            let e = HormanderExponents::paley(p)?;
            let r = lp_norm(&sfx, p)? / (lorentz_norm(s, e.s, f64::INFINITY)? * lp_norm(&x.x, p)?);
            bump(out, paley_key(p), r);
        }
    }
    Ok(())
}

fn hy_ratios(fs: &FourierStructure, x: &Operator, out: &mut BTreeMap<String, f64>) -> ncfourier::Result<()> {
    for &p in &HY_EXPONENTS {
        for mode in [HyMode::Forward, HyMode::Inverse] {
            bump(out, hy_key(mode, p), hy_check(fs, x, p, mode)?.ratio);
        }
    }
    Ok(())
}

/// Runs the sweep and returns the caps it implies.
pub fn sweep(opts: &SweepOptions) -> Result<Caps, HarnessError> {
    let grid = if opts.coarse {
        vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, -1.0),
        ]
    } else {
        grid_values()
    };
    let mut caps = BTreeMap::new();
    for n in [2usize, 3] {
        let g = Arc::new(build_group(&GroupKind::Cyclic(n))?);
        for dir in [Direction::FunctionSide, Direction::BlockSide] {
            let fs = FourierStructure::new(g.clone(), dir)?;
            let vecs = grid_vectors(n, &grid);
            let xs: Vec<Prepared> = vecs
                .iter()
                .map(|v| {
                    let x = Operator::from_values(fs.m().clone(), v)?;
                    let fx = fs.forward(&x)?;
                    Ok(Prepared { x, fx })
                })
                .collect::<ncfourier::Result<_>>()?;
            let sym: Vec<Operator> = vecs
                .iter()
                .map(|v| Operator::from_values(fs.m_hat().clone(), v))
                .collect::<ncfourier::Result<_>>()?;

            let grid_part = sym
                .par_iter()
                .enumerate()
                .map(|(i, s)| {
                    let mut m = BTreeMap::new();
                    hy_ratios(&fs, &xs[i].x, &mut m)?;
                    for x in &xs {
                        pair_ratios(&fs, s, x, &mut m)?;
                    }
                    Ok(m)
                })
                .try_reduce(BTreeMap::new, |a, b| Ok(merge(a, b)))
                .map_err(|e: ncfourier::Error| HarnessError::from(e))?;
            caps = merge(caps, grid_part);

            let label = format!("calibrate/{}", fs.name());
            let random_part = (0..opts.random as u64)
                .into_par_iter()
                .map(|t| {
                    let seed = trial_seed(opts.seed, &label, t);
                    let x = Operator::random(fs.m().clone(), seed, Ensemble::GeneralComplex);
                    let s = Operator::random(fs.m_hat().clone(), seed ^ 0xA5A5_A5A5, Ensemble::GeneralComplex);
                    let fx = fs.forward(&x)?;
                    let mut m = BTreeMap::new();
                    hy_ratios(&fs, &x, &mut m)?;
                    pair_ratios(&fs, &s, &Prepared { x, fx }, &mut m)?;
                    Ok(m)
                })
                .try_reduce(BTreeMap::new, |a, b| Ok(merge(a, b)))
                .map_err(|e: ncfourier::Error| HarnessError::from(e))?;
            caps = merge(caps, random_part);

            let climbs = Target::all()
                .into_par_iter()
                .flat_map_iter(|t| (0..opts.climbs as u64).map(move |k| (t, k)))
                .map(|(t, k)| {
                    let key = t.key();
                    let seed = trial_seed(opts.seed, &format!("climb/{}/{key}", fs.name()), k);
                    let mut m = BTreeMap::new();
                    bump(&mut m, key, climb(&fs, t, seed, opts.climb_evals));
                    m
                })
                .reduce(BTreeMap::new, merge);
            caps = merge(caps, climbs);
        }
    }
    let mut meta = BTreeMap::new();
    meta.insert("groups".into(), "cyclic(2), cyclic(3)".into());
    meta.insert("directions".into(), "function, block".into());
    meta.insert("grid".into(), format!("{} values{}", grid.len(), if opts.coarse { " (coarse)" } else { "" }));
    meta.insert("random".into(), opts.random.to_string());
    meta.insert("seed".into(), opts.seed.to_string());
    meta.insert("climbs".into(), format!("{} x {} evaluations", opts.climbs, opts.climb_evals));
    Ok(Caps::from_values(caps, meta))
}
