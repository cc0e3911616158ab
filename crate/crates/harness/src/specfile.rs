//! Operator spec files: one `block <dim> [weight <w>]` header per block
//! followed by `dim` rows of `dim` complex literals (`3`, `-1.5i`, `2+0.5i`).
//! `#` starts a comment.
//!
//! ```text
//! block 2 weight 1
//! 3 0
//! 0 1
//! ```

use std::sync::Arc;

use num_complex::Complex64;

use ncfourier::algebra::Block;
use ncfourier::group::parse_complex;
use ncfourier::{Operator, TraceAlgebra};

use crate::error::HarnessError;

#[derive(Debug, Clone, PartialEq)]
pub struct SpecBlock {
    pub dim: usize,
    pub weight: Option<f64>,
    /// Row-major.
    pub rows: Vec<Vec<Complex64>>,
}

pub fn parse_spec(text: &str) -> Result<Vec<SpecBlock>, HarnessError> {
    let mut blocks: Vec<SpecBlock> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks[0] == "block" {
            if let Some(b) = blocks.last() {
                if b.rows.len() != b.dim {
                    return Err(HarnessError::parse(line_no, "previous block has too few rows"));
                }
            }
            let dim: usize = toks
                .get(1)
                .and_then(|t| t.parse().ok())
                .filter(|&d| d > 0)
                .ok_or_else(|| HarnessError::parse(line_no, "expected `block <dim> [weight <w>]`"))?;
            let weight = match &toks[2..] {
                [] => None,
                ["weight", w] => Some(
                    w.parse::<f64>()
                        .ok()
                        .filter(|w| *w > 0.0 && w.is_finite())
                        .ok_or_else(|| HarnessError::parse(line_no, format!("bad weight '{w}'")))?,
                ),
                _ => return Err(HarnessError::parse(line_no, "expected `block <dim> [weight <w>]`")),
            };
            blocks.push(SpecBlock { dim, weight, rows: Vec::new() });
            continue;
        }
        let b = blocks
            .last_mut()
            .ok_or_else(|| HarnessError::parse(line_no, "matrix row before any `block` header"))?;
        if b.rows.len() == b.dim {
            return Err(HarnessError::parse(line_no, format!("block of dim {} has too many rows", b.dim)));
        }
        if toks.len() != b.dim {
            return Err(HarnessError::parse(line_no, format!("expected {} entries, found {}", b.dim, toks.len())));
        }
        let row = toks
            .iter()
            .map(|t| parse_complex(t).map_err(|e| HarnessError::parse(line_no, e)))
            .collect::<Result<Vec<_>, _>>()?;
        b.rows.push(row);
    }
    match blocks.last() {
        None => Err(HarnessError::Usage("operator spec has no blocks".into())),
        Some(b) if b.rows.len() != b.dim => Err(HarnessError::Usage("last block has too few rows".into())),
        _ => Ok(blocks),
    }
}

fn flatten(blocks: &[SpecBlock]) -> Vec<Complex64> {
    // Column-major per block.
    let mut out = Vec::new();
    for b in blocks {
        for j in 0..b.dim {
            for i in 0..b.dim {
                out.push(b.rows[i][j]);
            }
        }
    }
    out
}

/// The operator on its own algebra; missing weights default to 1.
pub fn standalone(blocks: &[SpecBlock], name: &str) -> Result<Operator, HarnessError> {
    let alg = TraceAlgebra::new(
        name,
        blocks.iter().map(|b| Block::new(b.dim, b.weight.unwrap_or(1.0))).collect(),
    )?;
    Ok(Operator::from_flat(alg, &flatten(blocks))?)
}

/// The operator on a given algebra; shapes must match and any stated weight must agree.
pub fn on_algebra(blocks: &[SpecBlock], alg: &Arc<TraceAlgebra>) -> Result<Operator, HarnessError> {
    let want = alg.blocks();
    if want.len() != blocks.len() {
        return Err(HarnessError::Usage(format!(
            "spec has {} blocks, {} has {}",
            blocks.len(),
            alg.name(),
            want.len()
        )));
    }
    for (k, (b, w)) in blocks.iter().zip(want).enumerate() {
        if b.dim != w.dim {
            return Err(HarnessError::Usage(format!("block {k} has dim {}, {} expects {}", b.dim, alg.name(), w.dim)));
        }
        if let Some(wt) = b.weight {
            if (wt - w.weight).abs() > 1e-12 * w.weight.max(1.0) {
                return Err(HarnessError::Usage(format!("block {k} has weight {wt}, {} expects {}", alg.name(), w.weight)));
            }
        }
    }
    Ok(Operator::from_flat(alg.clone(), &flatten(blocks))?)
}
