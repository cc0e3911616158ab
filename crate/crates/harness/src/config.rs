//! Line-oriented `key = value` configuration with `[section]` headers.
//!
//! Lists are comma-separated; commas inside parentheses do not split, so
//! `list = cyclic(3), product(2,4)` has two entries. `#` and `;` start
//! comments. Unknown sections and keys are errors.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use ncfourier::fourier::Direction;
use ncfourier::group::{builtin_groups, GroupKind};

use crate::error::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Axioms,
    Submultiplicativity,
    Lorentz,
    HausdorffYoung,
    Hormander,
    Paley,
    Equivariance,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Axioms,
        Suite::Submultiplicativity,
        Suite::Lorentz,
        Suite::HausdorffYoung,
        Suite::Hormander,
        Suite::Paley,
        Suite::Equivariance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Submultiplicativity => "submultiplicativity",
            Suite::Lorentz => "lorentz",
            Suite::HausdorffYoung => "hausdorff-young",
            Suite::Hormander => "hormander",
            Suite::Paley => "paley",
            Suite::Equivariance => "equivariance",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite '{s}'"))
    }
}

/// Where a group comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupSource {
    Builtin(GroupKind),
    File(PathBuf),
}

impl FromStr for GroupSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.strip_prefix("file:") {
            Some(path) => Ok(GroupSource::File(PathBuf::from(path.trim()))),
            None => s.parse::<GroupKind>().map(GroupSource::Builtin).map_err(|e| e.to_string()),
        }
    }
}

/// Per-suite trial counts that default to something other than `[run] trials`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialCounts {
    pub submultiplicativity: usize,
    pub weak: usize,
    pub chain: usize,
    /// Random symbols per (structure, p, q) for the ascent witness.
    pub witness: usize,
    /// Random symbols per (structure, g) for equivariance.
    pub equivariance: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Exponents {
    pub hy: Vec<f64>,
    pub hormander_p: Vec<f64>,
    pub hormander_q: Vec<f64>,
    pub paley: Vec<f64>,
    pub lpp: Vec<f64>,
    pub weak: Vec<f64>,
    pub holder: Vec<(f64, f64, f64)>,
    pub embedding: Vec<(f64, f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessOptions {
    pub enabled: bool,
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumOptions {
    pub lp: Vec<f64>,
    pub lorentz: Vec<(f64, f64)>,
    pub weak: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub seed: u64,
    pub trials: usize,
    /// 0 means one worker per core.
    pub workers: usize,
    pub out: Option<PathBuf>,
    pub calibration: Option<PathBuf>,
    /// Adds wall-clock seconds to each report entry, which breaks byte-identical reruns.
    pub timing: bool,
    pub groups: Vec<GroupSource>,
    pub directions: Vec<Direction>,
    pub suites: Vec<Suite>,
    pub counts: TrialCounts,
    pub exponents: Exponents,
    pub witness: WitnessOptions,
    pub caps: BTreeMap<String, f64>,
    pub spectrum: SpectrumOptions,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 42,
            trials: 1000,
            workers: 0,
            out: None,
            calibration: None,
            timing: false,
            groups: builtin_groups().into_iter().map(GroupSource::Builtin).collect(),
            directions: vec![Direction::FunctionSide, Direction::BlockSide],
            suites: Suite::ALL.to_vec(),
            counts: TrialCounts {
                submultiplicativity: 200,
                weak: 100,
                chain: 100,
                witness: 1,
                equivariance: 10,
            },
            exponents: Exponents {
                hy: vec![1.2, 1.5, 1.8, 2.0],
                hormander_p: vec![1.25, 1.5, 2.0],
                hormander_q: vec![2.0, 3.0, 4.0],
                paley: vec![1.25, 1.5, 2.0],
                lpp: vec![1.25, 1.5, 2.0, 3.0],
                weak: vec![1.5, 2.0, 4.0],
                holder: vec![(2.0, 2.0, 1.0), (4.0, 4.0, 2.0), (3.0, 6.0, 2.0)],
                embedding: vec![(2.0, 1.0, f64::INFINITY)],
            },
            witness: WitnessOptions {
                enabled: true,
                restarts: 2,
                max_iters: 300,
                tol: 1e-8,
            },
            caps: BTreeMap::new(),
            spectrum: SpectrumOptions {
                lp: vec![1.0, 2.0, f64::INFINITY],
                lorentz: vec![(2.0, 1.0), (2.0, 2.0), (2.0, f64::INFINITY)],
                weak: vec![2.0],
            },
        }
    }
}

/// Splits on commas at parenthesis depth zero.
pub fn split_list(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(cur.trim().to_string());
                cur.clear();
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    if !cur.trim().is_empty() || !out.is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

/// Positive real or `inf`.
pub fn parse_exponent(s: &str) -> Result<f64, String> {
    let v = match s.trim() {
        "inf" | "∞" => f64::INFINITY,
        t => t.parse::<f64>().map_err(|_| format!("'{t}' is not a number"))?,
    };
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("exponent must be positive, got {s}"))
    }
}

fn parse_tuple(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != n {
        return Err(format!("'{s}' should have {n} colon-separated exponents"));
    }
    parts.into_iter().map(parse_exponent).collect()
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(format!("'{s}' is not a boolean")),
    }
}

fn list<T>(v: &str, f: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, String> {
    split_list(v).iter().map(|s| f(s)).collect()
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let mut cfg = Config::default();
        let mut section = String::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split(['#', ';']).next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| HarnessError::parse(line_no, "unterminated section header"))?
                    .trim();
                if !["run", "groups", "suites", "trials", "exponents", "witness", "caps", "spectrum"].contains(&name) {
                    return Err(HarnessError::parse(line_no, format!("unknown section [{name}]")));
                }
                section = name.to_string();
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| HarnessError::parse(line_no, "expected key = value"))?;
            let (key, value) = (key.trim(), value.trim());
            cfg.set(&section, key, value)
                .map_err(|msg| HarnessError::parse(line_no, format!("[{section}] {key}: {msg}")))?;
        }
        Ok(cfg)
    }

    fn set(&mut self, section: &str, key: &str, v: &str) -> Result<(), String> {
        let num = |v: &str| v.parse::<usize>().map_err(|_| format!("'{v}' is not a non-negative integer"));
        match (section, key) {
            ("run", "seed") => self.seed = v.parse().map_err(|_| format!("'{v}' is not a 64-bit seed"))?,
            ("run", "trials") => self.trials = num(v)?,
            ("run", "workers") => self.workers = num(v)?,
            ("run", "out") => self.out = Some(PathBuf::from(v)),
            ("run", "calibration") => self.calibration = Some(PathBuf::from(v)),
            ("run", "timing") => self.timing = parse_bool(v)?,
            ("groups", "list") => {
                self.groups = if v == "builtin" {
                    Config::default().groups
                } else {
                    list(v, |s| s.parse::<GroupSource>())?
                }
            }
            ("groups", "directions") => {
                self.directions = list(v, |s| s.parse::<Direction>().map_err(|e| e.to_string()))?
            }
            ("suites", "enabled") => self.suites = list(v, |s| s.parse::<Suite>())?,
            ("trials", "submultiplicativity") => self.counts.submultiplicativity = num(v)?,
            ("trials", "weak") => self.counts.weak = num(v)?,
            ("trials", "chain") => self.counts.chain = num(v)?,
            ("trials", "witness") => self.counts.witness = num(v)?,
            ("trials", "equivariance") => self.counts.equivariance = num(v)?,
            ("exponents", "hausdorff-young") => self.exponents.hy = list(v, parse_exponent)?,
            ("exponents", "hormander-p") => self.exponents.hormander_p = list(v, parse_exponent)?,
            ("exponents", "hormander-q") => self.exponents.hormander_q = list(v, parse_exponent)?,
            ("exponents", "paley") => self.exponents.paley = list(v, parse_exponent)?,
            ("exponents", "lpp") => self.exponents.lpp = list(v, parse_exponent)?,
            ("exponents", "weak") => self.exponents.weak = list(v, parse_exponent)?,
            ("exponents", "holder") => {
                self.exponents.holder = list(v, |s| parse_tuple(s, 3).map(|t| (t[0], t[1], t[2])))?
            }
            ("exponents", "embedding") => {
                self.exponents.embedding = list(v, |s| parse_tuple(s, 3).map(|t| (t[0], t[1], t[2])))?
            }
            ("witness", "enabled") => self.witness.enabled = parse_bool(v)?,
            ("witness", "restarts") => self.witness.restarts = num(v)?,
            ("witness", "max-iters") => self.witness.max_iters = num(v)?,
            ("witness", "tol") => self.witness.tol = v.parse().map_err(|_| format!("'{v}' is not a number"))?,
            ("caps", k) => {
                let c: f64 = v.parse().map_err(|_| format!("'{v}' is not a number"))?;
                if !(c >= 0.0) {
                    return Err(format!("cap must be non-negative, got {v}"));
                }
                self.caps.insert(k.to_string(), c);
            }
            ("spectrum", "lp") => self.spectrum.lp = list(v, parse_exponent)?,
            ("spectrum", "lorentz") => {
                self.spectrum.lorentz = list(v, |s| parse_tuple(s, 2).map(|t| (t[0], t[1])))?
            }
            ("spectrum", "weak") => self.spectrum.weak = list(v, parse_exponent)?,
            ("", _) => return Err("key outside any section".into()),
            _ => return Err("unknown key".into()),
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list_splitting_respects_parentheses() {
        assert_eq!(split_list("cyclic(3), product(2,4) ,Q8"), vec!["cyclic(3)", "product(2,4)", "Q8"]);
        assert!(split_list("").is_empty());
    }

    #[test]
    fn parses_sections() {
        let cfg = Config::parse(
            "# c\n[run]\nseed = 7\ntrials = 5\n[groups]\nlist = cyclic(2), product(2,2)\ndirections = block\n\
             [suites]\nenabled = axioms, paley\n[exponents]\nholder = 2:2:1\nembedding = 2:1:inf\n[caps]\nhy.forward.p1.5000 = 0.0\n",
        )
        .unwrap();
        assert_eq!((cfg.seed, cfg.trials), (7, 5));
        assert_eq!(cfg.groups.len(), 2);
        assert_eq!(cfg.directions, vec![Direction::BlockSide]);
        assert_eq!(cfg.suites, vec![Suite::Axioms, Suite::Paley]);
        assert_eq!(cfg.exponents.embedding, vec![(2.0, 1.0, f64::INFINITY)]);
        assert_eq!(cfg.caps["hy.forward.p1.5000"], 0.0);
    }

    #[test]
    fn rejects_junk() {
        for bad in ["[nope]\n", "[run]\nseeds = 1\n", "[run]\nseed = x\n", "seed = 1\n", "[run]\nseed\n", "[suites]\nenabled = fft\n"] {
            assert!(Config::parse(bad).is_err(), "{bad}");
        }
    }
}
