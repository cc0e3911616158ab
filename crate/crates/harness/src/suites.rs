//! The verification suites behind `verify` and `certify`.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;

use ncfourier::estimate::{estimate_opnorm, EstimateOptions};
use ncfourier::fourier::{Direction, FourierStructure};
use ncfourier::group::{build_group, parse_group_file};
use ncfourier::lorentz::{
    check_embedding, check_holder, embedding_constant, lorentz_norm, lp_norm, weak_norm_via_distribution,
    HormanderExponents,
};
use ncfourier::multiplier::{
    chain_report, hormander_ratio, hy_check, paley_ratio, translation_equivariance, ChainCaps, HyMode,
    MultiplierSymbol,
};
use ncfourier::report::{trial_seed, CheckRecord};
use ncfourier::singular::check_submultiplicative;
use ncfourier::{Ensemble, Operator, TraceAlgebra};

use crate::calibration::{hormander_key, hy_key, paley_key, CapRef, Caps};
use crate::config::{Config, GroupSource, Suite};
use crate::error::HarnessError;
use crate::report::{CheckEntry, Num, Params};

const ENSEMBLES: [Ensemble; 4] = [Ensemble::GeneralComplex, Ensemble::Hermitian, Ensemble::Positive, Ensemble::Unitary];

/// Which checks to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    /// Everything the enabled suites cover.
    Full,
    /// Only identities that hold exactly: Plancherel, inversion, `L^{p,p} = L^p`
    /// and the `p = 2` endpoints.
    Certify,
}

pub fn load_structures(cfg: &Config) -> Result<Vec<FourierStructure>, HarnessError> {
    let mut out = Vec::new();
    for src in &cfg.groups {
        let g = match src {
            GroupSource::Builtin(kind) => build_group(kind)?,
            GroupSource::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| HarnessError::Usage(format!("cannot read group file {}: {e}", path.display())))?;
                parse_group_file(&text).map_err(|e| HarnessError::Usage(format!("{}: {e}", path.display())))?
            }
        };
        let g = Arc::new(g);
        for &dir in &cfg.directions {
            out.push(FourierStructure::new(g.clone(), dir)?);
        }
    }
    Ok(out)
}

fn distinct_algebras(structures: &[FourierStructure]) -> Vec<Arc<TraceAlgebra>> {
    let mut seen = BTreeMap::new();
    for fs in structures {
        for a in [fs.m(), fs.m_hat()] {
            seen.entry(a.name().to_string()).or_insert_with(|| a.clone());
        }
    }
    seen.into_values().collect()
}

/// A check record with its reporting metadata.
struct Pending {
    rec: CheckRecord,
    params: Params,
    cap_id: String,
}

impl Pending {
    fn new(name: &str, cap: &CapRef, slack: f64, params: Params) -> Self {
        Pending {
            rec: CheckRecord::with_slack(name, cap.value, slack),
            params,
            cap_id: cap.id.clone(),
        }
    }
}

/// Runs `n` trials of `f` and feeds the values, in trial order, to `checks`.
fn batch<F>(checks: &mut [&mut Pending], n: usize, base: u64, label: &str, f: F) -> Result<(), HarnessError>
where
    F: Fn(u64, u64) -> ncfourier::Result<Vec<f64>> + Sync,
{
    let rows: Vec<(u64, Vec<f64>)> = (0..n as u64)
        .into_par_iter()
        .map(|t| {
            let s = trial_seed(base, label, t);
            f(s, t).map(|v| (s, v))
        })
        .collect::<ncfourier::Result<_>>()
        .map_err(|e| HarnessError::Run(format!("{label}: {e}")))?;
    for (s, vals) in rows {
        for (c, v) in checks.iter_mut().zip(vals) {
            c.rec.record(v, s);
        }
    }
    Ok(())
}

struct Ctx<'a> {
    cfg: &'a Config,
    caps: &'a Caps,
    scope: Scope,
}

impl Ctx<'_> {
    fn cap(&self, key: &str) -> Result<CapRef, HarnessError> {
        self.caps.get(key)
    }

    fn exact(&self, key: &str, value: f64, why: &str) -> CapRef {
        self.caps.exact(key, value, why)
    }

    fn finish(&self, suite: Suite, pending: Vec<Pending>, started: Instant) -> Vec<CheckEntry> {
        let elapsed = started.elapsed().as_secs_f64();
        pending
            .into_iter()
            .map(|p| {
                let mut e = CheckEntry::from_record(suite.name(), &p.rec, p.params, p.cap_id);
                if self.cfg.timing {
                    e.elapsed = Some(elapsed);
                }
                e
            })
            .collect()
    }
}

fn fs_params(fs: &FourierStructure) -> Params {
    Params {
        group: Some(fs.group().name().to_string()),
        direction: Some(fs.direction().to_string()),
        ..Default::default()
    }
}

fn alg_params(a: &TraceAlgebra) -> Params {
    Params { algebra: Some(a.name().to_string()), ..Default::default() }
}

fn with_exps(mut p: Params, pe: Option<f64>, q: Option<f64>) -> Params {
    p.p = pe.map(Num);
    p.q = q.map(Num);
    p
}

fn axioms(ctx: &Ctx, fs: &FourierStructure) -> Result<Vec<CheckEntry>, HarnessError> {
    let t0 = Instant::now();
    let cfg = ctx.cfg;
    let names = ["f1-contractive", "f1-dominated", "plancherel", "inversion-m", "inversion-m-hat"];
    let caps = [
        (ctx.exact("f1", 1.0, "F1 with constant 1"), ncfourier::fourier::F1_SLACK),
        (ctx.exact("f1", 1.0, "F1 with constant 1"), ncfourier::fourier::F1_SLACK),
        (ctx.exact("plancherel", ncfourier::fourier::PLANCHEREL_TOL, "Plancherel tolerance"), 0.0),
        (ctx.exact("inversion", ncfourier::fourier::INVERSION_TOL, "inversion tolerance"), 0.0),
        (ctx.exact("inversion", ncfourier::fourier::INVERSION_TOL, "inversion tolerance"), 0.0),
    ];
    let mut pending: Vec<Pending> = names
        .iter()
        .zip(&caps)
        .map(|(n, (c, s))| Pending::new(n, c, *s, fs_params(fs)))
        .collect();
    let label = format!("axioms/{}", fs.name());
    {
        let mut refs: Vec<&mut Pending> = pending.iter_mut().collect();
        batch(&mut refs, cfg.trials, cfg.seed, &label, |s, _| {
            let t = fs.axiom_trial(s)?;
            Ok(vec![t.f1_contractive, t.f1_dominated, t.plancherel, t.inversion_m, t.inversion_m_hat])
        })?;
    }
    if ctx.scope == Scope::Certify {
        pending.drain(0..2);
    } else {
        // Both clauses are equalities at the extremal unit.
        let cap = ctx.exact("f1-equality", 1e-12, "equality at the unit");
        let mut eq = Pending::new("f1-equality-unit", &cap, 0.0, fs_params(fs));
        let e = fs.extremal_unit();
        let fe = fs.forward(&e)?;
        let d1 = (lp_norm(&fe, f64::INFINITY)? / lp_norm(&e, 1.0)? - 1.0).abs();
        let d2 = (lp_norm(&e, f64::INFINITY)? / lp_norm(&fe, 1.0)? - 1.0).abs();
        eq.rec.record(d1.max(d2), 0);
        pending.push(eq);
    }
    Ok(ctx.finish(Suite::Axioms, pending, t0))
}

fn submultiplicativity(ctx: &Ctx, alg: &Arc<TraceAlgebra>) -> Result<Vec<CheckEntry>, HarnessError> {
    let t0 = Instant::now();
    let cap = ctx.exact("submultiplicativity", 1e-10, "violation relative to scale");
    let mut p = Pending::new("corner-grid", &cap, 0.0, alg_params(alg));
    let label = format!("submultiplicativity/{}", alg.name());
    batch(&mut [&mut p], ctx.cfg.counts.submultiplicativity, ctx.cfg.seed, &label, |s, t| {
        let x = Operator::random(alg.clone(), s, ENSEMBLES[(t % 4) as usize]);
        let y = Operator::random(alg.clone(), s ^ 0x9E37, ENSEMBLES[((t / 4) % 4) as usize]);
        let c = check_submultiplicative(&x, &y)?;
        Ok(vec![if c.scale > 0.0 { c.max_violation / c.scale } else { 0.0 }])
    })?;
    Ok(ctx.finish(Suite::Submultiplicativity, vec![p], t0))
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        if a == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (a - b).abs() / b.abs()
    }
}

fn lorentz_suite(ctx: &Ctx, alg: &Arc<TraceAlgebra>) -> Result<Vec<CheckEntry>, HarnessError> {
    let t0 = Instant::now();
    let cfg = ctx.cfg;
    let ex = &cfg.exponents;
    let mut out = Vec::new();

    let mut lpp: Vec<Pending> = ex
        .lpp
        .iter()
        .map(|&p| {
            let cap = ctx.exact("lpp", 1e-9, "L^{p,p} = L^p isometry");
            Pending::new("lpp-isometry", &cap, 0.0, with_exps(alg_params(alg), Some(p), Some(p)))
        })
        .collect();
    {
        let mut refs: Vec<&mut Pending> = lpp.iter_mut().collect();
        batch(&mut refs, cfg.trials, cfg.seed, &format!("lpp/{}", alg.name()), |s, t| {
            let x = Operator::random(alg.clone(), s, ENSEMBLES[(t % 4) as usize]);
            ex.lpp.iter().map(|&p| Ok(rel(lorentz_norm(&x, p, p)?, lp_norm(&x, p)?))).collect()
        })?;
    }
    out.extend(lpp);

    if ctx.scope == Scope::Full {
        let mut weak: Vec<Pending> = ex
            .weak
            .iter()
            .map(|&r| {
                let cap = ctx.exact("weak", 1e-10, "distribution formula identity");
                let mut prm = alg_params(alg);
                prm.r = Some(Num(r));
                Pending::new("weak-identity", &cap, 0.0, prm)
            })
            .collect();
        {
            let mut refs: Vec<&mut Pending> = weak.iter_mut().collect();
            batch(&mut refs, cfg.counts.weak, cfg.seed, &format!("weak/{}", alg.name()), |s, t| {
                let x = Operator::random(alg.clone(), s, ENSEMBLES[(t % 4) as usize]);
                ex.weak
                    .iter()
                    .map(|&r| Ok(rel(weak_norm_via_distribution(&x, r)?, lorentz_norm(&x, r, f64::INFINITY)?)))
                    .collect()
            })?;
        }
        out.extend(weak);

        let mut holder: Vec<Pending> = ex
            .holder
            .iter()
            .map(|&(p0, p1, q)| {
                let p = 1.0 / (1.0 / p0 + 1.0 / p1);
                let cap = ctx.exact("holder", 1.0, "2^{1/p} included in rhs");
                let mut prm = with_exps(alg_params(alg), Some(p), Some(q));
                prm.r = Some(Num(p0));
                prm.s = Some(Num(p1));
                Pending::new("holder", &cap, 1e-10, prm)
            })
            .collect();
        {
            let mut refs: Vec<&mut Pending> = holder.iter_mut().collect();
            batch(&mut refs, cfg.trials, cfg.seed, &format!("holder/{}", alg.name()), |s, t| {
                let x = Operator::random(alg.clone(), s, ENSEMBLES[(t % 4) as usize]);
                let y = Operator::random(alg.clone(), s ^ 0x51, ENSEMBLES[((t / 4) % 4) as usize]);
                ex.holder
                    .iter()
                    .map(|&(p0, p1, q)| {
                        let h = check_holder(&x, &y, p0, p1, q)?;
                        Ok(if h.rhs > 0.0 { h.lhs / h.rhs } else { 0.0 })
                    })
                    .collect()
            })?;
        }
        out.extend(holder);

        let mut emb: Vec<Pending> = ex
            .embedding
            .iter()
            .map(|&(p, q, rr)| {
                let cap = ctx.exact("embedding", embedding_constant(p, q, rr), "sharp single-step constant");
                let mut prm = with_exps(alg_params(alg), Some(p), Some(q));
                prm.r = Some(Num(rr));
                Pending::new("embedding", &cap, 1e-10, prm)
            })
            .collect();
        {
            let mut refs: Vec<&mut Pending> = emb.iter_mut().collect();
            batch(&mut refs, cfg.trials, cfg.seed, &format!("embedding/{}", alg.name()), |s, t| {
                let x = Operator::random(alg.clone(), s, ENSEMBLES[(t % 4) as usize]);
                ex.embedding
                    .iter()
                    .map(|&(p, q, rr)| Ok(check_embedding(&x, p, q, rr, f64::INFINITY)?.ratio))
                    .collect()
            })?;
        }
        out.extend(emb);
    }
    Ok(ctx.finish(Suite::Lorentz, out, t0))
}

fn hausdorff_young(ctx: &Ctx, fs: &FourierStructure) -> Result<Vec<CheckEntry>, HarnessError> {
    let t0 = Instant::now();
    let cfg = ctx.cfg;
    let mut jobs: Vec<(f64, HyMode)> = Vec::new();
    let mut pending = Vec::new();
    for &p in &cfg.exponents.hy {
        if ctx.scope == Scope::Certify && p != 2.0 {
            continue;
        }
        for mode in [HyMode::Forward, HyMode::Inverse] {
            let mut prm = with_exps(fs_params(fs), Some(p), None);
            prm.mode = Some(format!("{mode:?}").to_lowercase());
            pending.push(if p == 2.0 {
                Pending::new("hy-endpoint", &ctx.exact("hy-endpoint", 1e-10, "Plancherel"), 0.0, prm)
            } else {
                Pending::new("hy", &ctx.cap(&hy_key(mode, p))?, 1e-10, prm)
            });
            jobs.push((p, mode));
        }
    }
    {
        let mut refs: Vec<&mut Pending> = pending.iter_mut().collect();
        batch(&mut refs, cfg.trials, cfg.seed, &format!("hy/{}", fs.name()), |s, _| {
            let x = Operator::random(fs.m().clone(), s, Ensemble::GeneralComplex);
            jobs.iter()
                .map(|&(p, mode)| {
                    let r = hy_check(fs, &x, p, mode)?.ratio;
                    Ok(if p == 2.0 { (r - 1.0).abs() } else { r })
                })
                .collect()
        })?;
    }
    Ok(ctx.finish(Suite::HausdorffYoung, pending, t0))
}

fn hormander(ctx: &Ctx, fs: &FourierStructure) -> Result<Vec<CheckEntry>, HarnessError> {
    let t0 = Instant::now();
    let cfg = ctx.cfg;
    let mut out = Vec::new();
    let c1 = Complex64::from_polar(3.7, 0.9);
    let c2 = Complex64::from_polar(0.013, -2.1);
    for &p in &cfg.exponents.hormander_p {
        for &q in &cfg.exponents.hormander_q {
            if ctx.scope == Scope::Certify && !(p == 2.0 && q == 2.0) {
                continue;
            }
            let e = HormanderExponents::hormander(p, q)?;
            let mut prm = with_exps(fs_params(fs), Some(p), Some(q));
            prm.r = Some(Num(e.r));
            let label = format!("hormander/{}/{p}/{q}", fs.name());
            let cap = if ctx.scope == Scope::Certify {
                ctx.exact("hormander-endpoint", 1.0, "Plancherel and operator norm of σ")
            } else {
                ctx.cap(&hormander_key(p, q))?
            };
            let mut main = Pending::new("hormander", &cap, 1e-10, prm.clone());
            let scale_cap = ctx.exact("hormander-scale", 1e-10, "1-homogeneity");
            let mut scale = Pending::new("hormander-scale", &scale_cap, 0.0, prm.clone());
            batch(&mut [&mut main, &mut scale], cfg.trials, cfg.seed, &label, |s, _| {
                let sigma = MultiplierSymbol::random(fs, s ^ 0x5157);
                let x = Operator::random(fs.m().clone(), s, Ensemble::GeneralComplex);
                let r = hormander_ratio(fs, &sigma, &x, &e)?;
                let rs = hormander_ratio(fs, &sigma.scale(c1), &x, &e)?;
                let rx = hormander_ratio(fs, &sigma, &x.scale(c2), &e)?;
                Ok(vec![r, rel(rs, r).max(rel(rx, r))])
            })?;
            out.push(main);
            if ctx.scope == Scope::Certify {
                continue;
            }
            out.push(scale);

            let caps = ChainCaps {
                inverse_hy: ctx.cap(&hy_key(HyMode::Inverse, e.q_conj))?.value,
                hy: ctx.cap(&hy_key(HyMode::Forward, p))?.value,
            };
            let dil = 2f64.powf(1.0 / e.q_conj);
            let step_caps = [
                ctx.cap(&hy_key(HyMode::Inverse, e.q_conj))?,
                ctx.exact("chain-b", dil, "dilation by 2"),
                ctx.exact("chain-c", dil, "Lorentz Hölder constant"),
                ctx.exact("chain-d", embedding_constant(e.p_conj, p, q), "sharp embedding constant"),
                ctx.cap(&hy_key(HyMode::Forward, p))?,
            ];
            let mut chain: Vec<Pending> = ["chain-a", "chain-b", "chain-c", "chain-d", "chain-e"]
                .iter()
                .zip(&step_caps)
                .map(|(n, c)| Pending::new(n, c, 1e-10, prm.clone()))
                .collect();
            chain.push(Pending::new(
                "chain-consistency",
                &ctx.exact("chain-consistency", 1e-9, "product of step ratios"),
                0.0,
                prm.clone(),
            ));
            {
                let mut refs: Vec<&mut Pending> = chain.iter_mut().collect();
                batch(&mut refs, cfg.counts.chain, cfg.seed, &format!("chain/{}/{p}/{q}", fs.name()), |s, _| {
                    let sigma = MultiplierSymbol::random(fs, s ^ 0x5157);
                    let x = Operator::random(fs.m().clone(), s, Ensemble::GeneralComplex);
                    let r = chain_report(fs, &sigma, &x, &e, caps)?;
                    let mut v: Vec<f64> = r.steps.iter().map(|st| st.cmp.ratio).collect();
                    v.push(rel(r.product_of_ratios(), r.end_to_end));
                    Ok(v)
                })?;
            }
            out.extend(chain);

            if cfg.witness.enabled && cfg.counts.witness > 0 {
                let mut w = Pending::new("hormander-witness", &cap, 1e-10, prm.clone());
                let opts = |seed| EstimateOptions {
                    restarts: cfg.witness.restarts,
                    max_iters: cfg.witness.max_iters,
                    tol: cfg.witness.tol,
                    seed,
                };
                batch(&mut [&mut w], cfg.counts.witness, cfg.seed, &format!("witness/{}/{p}/{q}", fs.name()), |s, _| {
                    let sigma = MultiplierSymbol::random(fs, s);
                    let est = estimate_opnorm(fs, &sigma, p, q, &opts(s))?;
                    Ok(vec![est.lower_bound / lorentz_norm(sigma.symbol(), e.r, f64::INFINITY)?])
                })?;
                out.push(w);
            }
        }
    }
    Ok(ctx.finish(Suite::Hormander, out, t0))
}

fn paley(ctx: &Ctx, fs: &FourierStructure) -> Result<Vec<CheckEntry>, HarnessError> {
    let t0 = Instant::now();
    let cfg = ctx.cfg;
    let mut ps = Vec::new();
    let mut pending = Vec::new();
    for &p in &cfg.exponents.paley {
        if ctx.scope == Scope::Certify && p != 2.0 {
            continue;
        }
        let e = HormanderExponents::paley(p)?;
        let mut prm = with_exps(fs_params(fs), Some(p), None);
        prm.s = Some(Num(e.s));
        pending.push(if p == 2.0 {
            Pending::new("paley-endpoint", &ctx.exact("paley-endpoint", 1.0, "Plancherel"), 1e-10, prm)
        } else {
            Pending::new("paley", &ctx.cap(&paley_key(p))?, 1e-10, prm)
        });
        ps.push(p);
    }
    {
        let mut refs: Vec<&mut Pending> = pending.iter_mut().collect();
        batch(&mut refs, cfg.trials, cfg.seed, &format!("paley/{}", fs.name()), |s, _| {
            let y = Operator::random(fs.m_hat().clone(), s ^ 0x9A1E, Ensemble::GeneralComplex);
            let x = Operator::random(fs.m().clone(), s, Ensemble::GeneralComplex);
            ps.iter().map(|&p| paley_ratio(fs, &y, &x, p)).collect()
        })?;
    }
    Ok(ctx.finish(Suite::Paley, pending, t0))
}

fn equivariance(ctx: &Ctx, fs: &FourierStructure) -> Result<Vec<CheckEntry>, HarnessError> {
    let t0 = Instant::now();
    if fs.direction() != Direction::FunctionSide {
        return Ok(Vec::new());
    }
    let cap = ctx.exact("equivariance", 1e-9, "left invariance, relative to scale");
    let mut p = Pending::new("left-invariance", &cap, 0.0, fs_params(fs));
    for g in 0..fs.group().order() {
        batch(&mut [&mut p], ctx.cfg.counts.equivariance, ctx.cfg.seed, &format!("equivariance/{}/{g}", fs.name()), |s, _| {
            let sigma = MultiplierSymbol::random(fs, s);
            Ok(vec![translation_equivariance(fs, &sigma, g, 10, s ^ 0xE0)?.unwrap_or(0.0)])
        })?;
    }
    Ok(ctx.finish(Suite::Equivariance, vec![p], t0))
}

/// Runs the configured suites and returns one entry per check, in a fixed order.
pub fn run_suites(cfg: &Config, caps: &Caps, scope: Scope) -> Result<Vec<CheckEntry>, HarnessError> {
    let structures = load_structures(cfg)?;
    let algebras = distinct_algebras(&structures);
    let ctx = Ctx { cfg, caps, scope };
    let suites: Vec<Suite> = match scope {
        Scope::Full => Suite::ALL.into_iter().filter(|s| cfg.suites.contains(s)).collect(),
        Scope::Certify => vec![Suite::Axioms, Suite::Lorentz, Suite::HausdorffYoung, Suite::Hormander, Suite::Paley],
    };
    let mut out = Vec::new();
    for suite in suites {
        let per: Vec<Vec<CheckEntry>> = match suite {
            Suite::Submultiplicativity => algebras
                .par_iter()
                .map(|a| submultiplicativity(&ctx, a))
                .collect::<Result<_, _>>()?,
            Suite::Lorentz => algebras.par_iter().map(|a| lorentz_suite(&ctx, a)).collect::<Result<_, _>>()?,
            _ => structures
                .par_iter()
                .map(|fs| match suite {
                    Suite::Axioms => axioms(&ctx, fs),
                    Suite::HausdorffYoung => hausdorff_young(&ctx, fs),
                    Suite::Hormander => hormander(&ctx, fs),
                    Suite::Paley => paley(&ctx, fs),
                    Suite::Equivariance => equivariance(&ctx, fs),
                    _ => unreachable!(),
                })
                .collect::<Result<_, _>>()?,
        };
        out.extend(per.into_iter().flatten());
    }
    Ok(out)
}
