//! The subcommands. Each returns the process exit code: 0 pass, 1 violation;
//! errors carry their own code (2 for usage and parse problems).

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::Args;
use serde::Serialize;

use ncfourier::estimate::{estimate_opnorm, EstimateOptions};
use ncfourier::fourier::{Direction, FourierStructure};
use ncfourier::group::{build_group, parse_group_file, GroupKind};
use ncfourier::lorentz::{lorentz_norm, lp_norm, weak_norm_via_distribution};
use ncfourier::multiplier::{exact_opnorm_endpoint, MultiplierSymbol};
use ncfourier::singular::singular_function;
use ncfourier::{Ensemble, Operator};

use crate::calibration::{sweep, Caps, SweepOptions};
use crate::config::{parse_exponent, Config};
use crate::error::HarnessError;
use crate::report::{Num, Report};
use crate::specfile::{on_algebra, parse_spec, standalone};
use crate::suites::{run_suites, Scope};

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Configuration file (INI); built-in defaults when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Base seed; overrides `[run] seed`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Trials per check; overrides `[run] trials`.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    pub workers: Option<usize>,
}

/// Reads the config and applies command-line overrides. Relative paths inside
/// the file resolve against the file's directory.
pub fn load_config(common: &Common) -> Result<Config, HarnessError> {
    let mut cfg = match &common.config {
        None => Config::default(),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| HarnessError::Usage(format!("cannot read config {}: {e}", path.display())))?;
            let mut cfg = Config::parse(&text)
                .map_err(|e| HarnessError::Usage(format!("{}: {e}", path.display())))?;
            let base = path.parent().unwrap_or(Path::new("."));
            cfg.calibration = cfg.calibration.map(|p| base.join(p));
            for g in cfg.groups.iter_mut() {
                if let crate::config::GroupSource::File(p) = g {
                    *p = base.join(&*p);
                }
            }
            cfg
        }
    };
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(t) = common.trials {
        cfg.trials = t;
    }
    if let Some(o) = &common.out {
        cfg.out = Some(o.clone());
    }
    if let Some(w) = common.workers {
        cfg.workers = w;
    }
    Ok(cfg)
}

pub fn load_caps(cfg: &Config) -> Result<Caps, HarnessError> {
    let caps = match &cfg.calibration {
        Some(p) => Caps::load(p)?,
        None => Caps::builtin(),
    };
    Ok(caps.with_overrides(&cfg.caps))
}

fn pool(workers: usize) -> Result<rayon::ThreadPool, HarnessError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| HarnessError::Run(format!("cannot start workers: {e}")))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), HarnessError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| HarnessError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Runs the suites and writes the report.
pub fn run_report(common: &Common, scope: Scope) -> Result<Report, HarnessError> {
    let cfg = load_config(common)?;
    let caps = load_caps(&cfg)?;
    let checks = pool(cfg.workers)?.install(|| run_suites(&cfg, &caps, scope))?;
    let name = match scope {
        Scope::Full => "verify",
        Scope::Certify => "certify",
    };
    let report = Report::new(name, cfg.seed, cfg.trials, caps.id().to_string(), checks);
    emit(cfg.out.as_deref(), &report.to_json())?;
    Ok(report)
}

fn verdict(report: &Report) -> i32 {
    for c in report.failing() {
        eprintln!(
            "violation: {} {} {:?}: {} of {} trials above cap (max {:?}, cap {:?}, {})",
            c.suite, c.check_name, c.params, c.violations, c.trials, c.max_ratio.0, c.cap.0, c.cap_id
        );
    }
    eprintln!("{}: {} checks, {} violations", report.command, report.total_checks, report.total_violations);
    if report.total_violations > 0 {
        1
    } else {
        0
    }
}

pub fn verify(common: &Common) -> Result<i32, HarnessError> {
    run_report(common, Scope::Full).map(|r| verdict(&r))
}

pub fn certify(common: &Common) -> Result<i32, HarnessError> {
    run_report(common, Scope::Certify).map(|r| verdict(&r))
}

/// Regenerates the calibration file.
pub fn calibrate(common: &Common) -> Result<i32, HarnessError> {
    let mut opts = SweepOptions::default();
    if let Some(s) = common.seed {
        opts.seed = s;
    }
    if let Some(t) = common.trials {
        opts.random = t;
    }
    let caps = pool(common.workers.unwrap_or(0))?.install(|| sweep(&opts))?;
    emit(common.out.as_deref(), &caps.to_ini())?;
    Ok(0)
}

pub fn structure(group: &str, direction: &str) -> Result<FourierStructure, HarnessError> {
    let dir: Direction = direction.parse().map_err(|e: ncfourier::Error| HarnessError::Usage(e.to_string()))?;
    let g = match group.strip_prefix("file:") {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| HarnessError::Usage(format!("cannot read group file {path}: {e}")))?;
            parse_group_file(&text).map_err(|e| HarnessError::Usage(format!("{path}: {e}")))?
        }
        None => {
            let kind: GroupKind = group.parse().map_err(|e: ncfourier::Error| HarnessError::Usage(e.to_string()))?;
            build_group(&kind).map_err(|e| HarnessError::Usage(e.to_string()))?
        }
    };
    Ok(FourierStructure::new(Arc::new(g), dir)?)
}

/// `random:<seed>`, `identity`, or a spec file, on the given algebra.
fn operator_on(spec: &str, alg: &Arc<ncfourier::TraceAlgebra>) -> Result<Operator, HarnessError> {
    if let Some(s) = spec.strip_prefix("random:") {
        let seed: u64 = s.parse().map_err(|_| HarnessError::Usage(format!("bad seed in '{spec}'")))?;
        return Ok(Operator::random(alg.clone(), seed, Ensemble::GeneralComplex));
    }
    if spec == "identity" {
        return Ok(Operator::identity(alg.clone()));
    }
    on_algebra(&parse_spec(&read_spec(spec)?)?, alg)
}

fn read_spec(path: &str) -> Result<String, HarnessError> {
    std::fs::read_to_string(path).map_err(|e| HarnessError::Usage(format!("cannot read spec {path}: {e}")))
}

#[derive(Debug, Clone, Args)]
pub struct NormArgs {
    /// Group: cyclic(n), product(a,b,..), dihedral(n), symmetric3, quaternion8, or file:PATH.
    #[arg(long)]
    pub group: String,
    /// function or block.
    #[arg(long, default_value = "function")]
    pub direction: String,
    /// Symbol: random:<seed>, identity, or an operator spec file on the dual algebra.
    #[arg(long)]
    pub sigma: String,
    #[arg(long)]
    pub p: String,
    #[arg(long)]
    pub q: String,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    #[arg(long, default_value_t = 2000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Serialize)]
struct EstimateOut {
    lower_bound: Num,
    iterations: usize,
    restarts_used: usize,
    converged: bool,
    /// Flattened entries as `[re, im]`, blocks in order, each column-major.
    witness: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct NormOut {
    structure: String,
    p: Num,
    q: Num,
    r: Option<Num>,
    estimate: EstimateOut,
    bound: Option<Num>,
    ratio: Option<Num>,
    oracle: Option<Num>,
}

pub fn norm(args: &NormArgs) -> Result<i32, HarnessError> {
    let fs = structure(&args.group, &args.direction)?;
    let p = parse_exponent(&args.p).map_err(HarnessError::Usage)?;
    let q = parse_exponent(&args.q).map_err(HarnessError::Usage)?;
    if p < 1.0 || q < 1.0 {
        return Err(HarnessError::Usage("norm needs p, q ≥ 1".into()));
    }
    let sigma = MultiplierSymbol::new(&fs, operator_on(&args.sigma, fs.m_hat())?)?;
    let cfg = load_config(&args.common)?;
    let opts = EstimateOptions {
        restarts: args.restarts,
        max_iters: args.max_iters,
        tol: args.tol,
        seed: cfg.seed,
    };
    let est = pool(cfg.workers)?.install(|| estimate_opnorm(&fs, &sigma, p, q, &opts))?;
    let inv_r = 1.0 / p - 1.0 / q;
    let r = if inv_r > 0.0 {
        Some(1.0 / inv_r)
    } else if inv_r == 0.0 {
        Some(f64::INFINITY)
    } else {
        None
    };
    let bound = r.map(|r| lorentz_norm(sigma.symbol(), r, f64::INFINITY)).transpose()?;
    let out = NormOut {
        structure: fs.name().to_string(),
        p: Num(p),
        q: Num(q),
        r: r.map(Num),
        estimate: EstimateOut {
            lower_bound: Num(est.lower_bound),
            iterations: est.iterations,
            restarts_used: est.restarts_used,
            converged: est.converged,
            witness: est.witness.to_flat().iter().map(|z| [z.re, z.im]).collect(),
        },
        bound: bound.map(Num),
        ratio: bound.map(|b| Num(est.lower_bound / b)),
        oracle: exact_opnorm_endpoint(&fs, &sigma, p, q)?.map(Num),
    };
    let mut text = serde_json::to_string_pretty(&out).expect("norm output serializes");
    text.push('\n');
    emit(cfg.out.as_deref(), &text)?;
    Ok(0)
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    /// Group for the algebra; omit to take blocks and weights from the spec file.
    #[arg(long)]
    pub group: Option<String>,
    /// function or block; the operator lives in the structure's M.
    #[arg(long, default_value = "function")]
    pub direction: String,
    /// random:<seed>, identity, or an operator spec file.
    #[arg(long)]
    pub operator: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Serialize)]
struct NormValue {
    p: Num,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<Num>,
    value: Num,
}

#[derive(Serialize)]
struct SpectrumSummary {
    algebra: String,
    operator: String,
    rows: usize,
    lp: Vec<NormValue>,
    lorentz: Vec<NormValue>,
    weak: Vec<NormValue>,
}

pub fn spectrum(args: &SpectrumArgs) -> Result<i32, HarnessError> {
    let cfg = load_config(&args.common)?;
    let x = match &args.group {
        Some(g) => operator_on(&args.operator, structure(g, &args.direction)?.m())?,
        None => {
            if args.operator.starts_with("random:") || args.operator == "identity" {
                return Err(HarnessError::Usage(format!("'{}' needs --group", args.operator)));
            }
            standalone(&parse_spec(&read_spec(&args.operator)?)?, &args.operator)?
        }
    };
    let mu = singular_function(&x)?;
    let mut csv = String::from("t_left,t_right,value\n");
    for (l, r, v) in mu.intervals() {
        csv.push_str(&format!("{l},{r},{v}\n"));
    }
    let sp = &cfg.spectrum;
    let summary = SpectrumSummary {
        algebra: x.algebra().name().to_string(),
        operator: args.operator.clone(),
        rows: mu.len(),
        lp: sp
            .lp
            .iter()
            .map(|&p| Ok(NormValue { p: Num(p), q: None, value: Num(lp_norm(&x, p)?) }))
            .collect::<ncfourier::Result<_>>()?,
        lorentz: sp
            .lorentz
            .iter()
            .map(|&(p, q)| Ok(NormValue { p: Num(p), q: Some(Num(q)), value: Num(lorentz_norm(&x, p, q)?) }))
            .collect::<ncfourier::Result<_>>()?,
        weak: sp
            .weak
            .iter()
            .map(|&r| Ok(NormValue { p: Num(r), q: None, value: Num(weak_norm_via_distribution(&x, r)?) }))
            .collect::<ncfourier::Result<_>>()?,
    };
    let mut json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    json.push('\n');
    match &cfg.out {
        Some(path) => {
            emit(Some(path), &csv)?;
            emit(Some(&path.with_extension("json")), &json)?;
        }
        None => {
            print!("{csv}");
            eprint!("{json}");
        }
    }
    Ok(0)
}
