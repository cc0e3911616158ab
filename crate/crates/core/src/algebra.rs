//! Finite-dimensional tracial algebras: weighted direct sums of full matrix
//! blocks `⊕_k M_{d_k}` with trace `τ(x) = Σ_k w_k · Tr(x_k)`.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::eig::{hermitian_defect, jacobi_eigh, HermitianEigen};
use crate::error::{Error, Result};

/// Tolerance on `max |x - x*|` (relative to `max(1, max |x_ij|)`) accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Negative Gram eigenvalues above `-GRAM_NEG_TOL · λ_max` are roundoff and clipped.
pub const GRAM_NEG_TOL: f64 = 1e-12;

/// Gram eigenvalues at or below `GRAM_ZERO_FLOOR · λ_max` are treated as exact zeros.
///
/// The Gram matrix `x*x` is formed in floating point, so a zero singular value
/// of `x` surfaces as an eigenvalue of order `n·ε·λ_max`, i.e. a spurious
/// singular value near `1e-7 · ‖x‖`.
pub const GRAM_ZERO_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Block {
    pub dim: usize,
    pub weight: f64,
}

impl Block {
    pub fn new(dim: usize, weight: f64) -> Self {
        Block { dim, weight }
    }
}

/// A weighted direct sum of matrix blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceAlgebra {
    name: String,
    blocks: Vec<Block>,
}

impl TraceAlgebra {
    pub fn new(name: impl Into<String>, blocks: Vec<Block>) -> Result<Arc<Self>> {
        if blocks.is_empty() {
            return Err(Error::Contract("algebra needs at least one block".into()));
        }
        for (k, b) in blocks.iter().enumerate() {
            if b.dim == 0 {
                return Err(Error::Contract(format!("block {k} has dimension 0")));
            }
            if !(b.weight.is_finite() && b.weight > 0.0) {
                return Err(Error::Contract(format!(
                    "block {k} has weight {}, expected a finite positive real",
                    b.weight
                )));
            }
        }
        Ok(Arc::new(TraceAlgebra {
            name: name.into(),
            blocks,
        }))
    }

    /// `n` one-dimensional blocks of weight `weight`: functions on `n` points.
    pub fn diagonal(name: impl Into<String>, n: usize, weight: f64) -> Result<Arc<Self>> {
        Self::new(name, vec![Block::new(1, weight); n])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// `τ(1) = Σ_k w_k d_k`.
    pub fn total_mass(&self) -> f64 {
        self.blocks.iter().map(|b| b.weight * b.dim as f64).sum()
    }

    /// Complex dimension `Σ_k d_k²`.
    pub fn dimension(&self) -> usize {
        self.blocks.iter().map(|b| b.dim * b.dim).sum()
    }

    pub fn is_commutative(&self) -> bool {
        self.blocks.iter().all(|b| b.dim == 1)
    }

    fn same_shape(&self, other: &TraceAlgebra) -> bool {
        self.blocks == other.blocks
    }
}

impl fmt::Display for TraceAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [", self.name)?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "M{}·{}", b.dim, b.weight)?;
        }
        write!(f, "]")
    }
}

/// Random ensembles for [`Operator::random`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ensemble {
    /// Independent standard complex Gaussian entries (`E|z|² = 1`).
    GeneralComplex,
    /// `(g + g*)/2` of a general draw.
    Hermitian,
    /// `g*g` of a general draw.
    Positive,
    /// Unitary factor of the QR decomposition of a general draw, phases fixed.
    Unitary,
}

/// An element of a [`TraceAlgebra`]: one complex matrix per block.
#[derive(Debug, Clone)]
pub struct Operator {
    algebra: Arc<TraceAlgebra>,
    mats: Vec<DMatrix<Complex64>>,
}

impl Operator {
    pub fn new(algebra: Arc<TraceAlgebra>, mats: Vec<DMatrix<Complex64>>) -> Result<Self> {
        if mats.len() != algebra.blocks.len() {
            return Err(Error::Structural(format!(
                "{} blocks supplied, algebra {} has {}",
                mats.len(),
                algebra.name,
                algebra.blocks.len()
            )));
        }
        for (k, (m, b)) in mats.iter().zip(&algebra.blocks).enumerate() {
            if m.nrows() != b.dim || m.ncols() != b.dim {
                return Err(Error::Structural(format!(
                    "block {k} is {}x{}, expected {}x{}",
                    m.nrows(),
                    m.ncols(),
                    b.dim,
                    b.dim
                )));
            }
            if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::Contract(format!("block {k} has non-finite entries")));
            }
        }
        Ok(Operator { algebra, mats })
    }

    /// Operator on a commutative algebra given by its values, one per block.
    pub fn from_values(algebra: Arc<TraceAlgebra>, values: &[Complex64]) -> Result<Self> {
        if !algebra.is_commutative() {
            return Err(Error::Structural(format!(
                "{} is not commutative; from_values needs 1x1 blocks",
                algebra.name
            )));
        }
        let mats = values
            .iter()
            .map(|&v| DMatrix::from_element(1, 1, v))
            .collect();
        Self::new(algebra, mats)
    }

    /// Real-valued convenience for [`Operator::from_values`].
    pub fn from_reals(algebra: Arc<TraceAlgebra>, values: &[f64]) -> Result<Self> {
        let v: Vec<Complex64> = values.iter().map(|&r| Complex64::new(r, 0.0)).collect();
        Self::from_values(algebra, &v)
    }

    pub fn zeros(algebra: Arc<TraceAlgebra>) -> Self {
        let mats = algebra
            .blocks
            .iter()
            .map(|b| DMatrix::zeros(b.dim, b.dim))
            .collect();
        Operator { algebra, mats }
    }

    pub fn identity(algebra: Arc<TraceAlgebra>) -> Self {
        let mats = algebra
            .blocks
            .iter()
            .map(|b| DMatrix::identity(b.dim, b.dim))
            .collect();
        Operator { algebra, mats }
    }

    /// Entries in block order, each block column-major.
    pub fn from_flat(algebra: Arc<TraceAlgebra>, flat: &[Complex64]) -> Result<Self> {
        if flat.len() != algebra.dimension() {
            return Err(Error::Structural(format!(
                "{} coordinates supplied, algebra {} has dimension {}",
                flat.len(),
                algebra.name,
                algebra.dimension()
            )));
        }
        let mut offset = 0;
        let mut mats = Vec::with_capacity(algebra.blocks.len());
        for b in &algebra.blocks {
            let len = b.dim * b.dim;
            mats.push(DMatrix::from_column_slice(b.dim, b.dim, &flat[offset..offset + len]));
            offset += len;
        }
        Self::new(algebra, mats)
    }

    pub fn to_flat(&self) -> Vec<Complex64> {
        self.mats.iter().flat_map(|m| m.iter().copied()).collect()
    }

    /// Deterministic draw from `ensemble` seeded by `seed`.
    pub fn random(algebra: Arc<TraceAlgebra>, seed: u64, ensemble: Ensemble) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scale = std::f64::consts::FRAC_1_SQRT_2;
        let mats = algebra
            .blocks
            .iter()
            .map(|b| {
                let g = DMatrix::from_fn(b.dim, b.dim, |_, _| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    Complex64::new(re * scale, im * scale)
                });
                match ensemble {
                    Ensemble::GeneralComplex => g,
                    Ensemble::Hermitian => (&g + g.adjoint()) * Complex64::new(0.5, 0.0),
                    Ensemble::Positive => g.adjoint() * &g,
                    Ensemble::Unitary => unitary_factor(g),
                }
            })
            .collect();
        Operator { algebra, mats }
    }

    pub fn algebra(&self) -> &Arc<TraceAlgebra> {
        &self.algebra
    }

    pub fn blocks(&self) -> &[DMatrix<Complex64>] {
        &self.mats
    }

    pub fn block(&self, k: usize) -> &DMatrix<Complex64> {
        &self.mats[k]
    }

    /// Value of a 1x1 block.
    pub fn value(&self, k: usize) -> Complex64 {
        self.mats[k][(0, 0)]
    }

    pub fn same_algebra(&self, other: &Operator) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra.same_shape(&other.algebra)
    }

    fn check_same(&self, other: &Operator, what: &str) -> Result<()> {
        if self.same_algebra(other) {
            Ok(())
        } else {
            Err(Error::Structural(format!(
                "{what}: operands live in {} and {}",
                self.algebra, other.algebra
            )))
        }
    }

    fn zip_with(
        &self,
        other: &Operator,
        what: &str,
        f: impl Fn(&DMatrix<Complex64>, &DMatrix<Complex64>) -> DMatrix<Complex64>,
    ) -> Result<Operator> {
        self.check_same(other, what)?;
        let mats = self.mats.iter().zip(&other.mats).map(|(a, b)| f(a, b)).collect();
        Ok(Operator {
            algebra: self.algebra.clone(),
            mats,
        })
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    pub fn multiply(&self, other: &Operator) -> Result<Operator> {
        self.zip_with(other, "multiply", |a, b| a * b)
    }

    pub fn adjoint(&self) -> Operator {
        self.map_blocks(|m| m.adjoint())
    }

    pub fn scale(&self, c: Complex64) -> Operator {
        self.map_blocks(|m| m * c)
    }

    pub fn map_blocks(&self, f: impl Fn(&DMatrix<Complex64>) -> DMatrix<Complex64>) -> Operator {
        Operator {
            algebra: self.algebra.clone(),
            mats: self.mats.iter().map(f).collect(),
        }
    }

    /// `τ(x) = Σ_k w_k · Tr(x_k)`.
    pub fn trace(&self) -> Complex64 {
        self.algebra
            .blocks
            .iter()
            .zip(&self.mats)
            .map(|(b, m)| m.trace() * b.weight)
            .sum()
    }

    /// `τ(x y*)`, the L²(M) inner product.
    pub fn inner(&self, other: &Operator) -> Result<Complex64> {
        self.check_same(other, "inner")?;
        Ok(self
            .algebra
            .blocks
            .iter()
            .zip(self.mats.iter().zip(&other.mats))
            .map(|(b, (x, y))| {
                x.iter()
                    .zip(y.iter())
                    .map(|(a, c)| a * c.conj())
                    .sum::<Complex64>()
                    * b.weight
            })
            .sum())
    }

    /// Largest entry modulus over all blocks.
    pub fn max_entry(&self) -> f64 {
        self.mats
            .iter()
            .flat_map(|m| m.iter())
            .fold(0.0f64, |acc, z| acc.max(z.norm()))
    }

    /// Largest entry of `|self - other|`.
    pub fn max_entry_diff(&self, other: &Operator) -> Result<f64> {
        Ok(self.sub(other)?.max_entry())
    }

    pub fn is_zero(&self) -> bool {
        self.mats.iter().all(|m| m.iter().all(|z| *z == Complex64::new(0.0, 0.0)))
    }

    /// Per-block Hermitian eigendecomposition, eigenvalues descending.
    pub fn hermitian_eig(&self) -> Result<Vec<HermitianEigen>> {
        self.mats
            .iter()
            .enumerate()
            .map(|(k, m)| {
                let scale = m.iter().fold(1.0f64, |acc, z| acc.max(z.norm()));
                let defect = hermitian_defect(m);
                if defect > HERMITIAN_TOL * scale {
                    return Err(Error::Contract(format!(
                        "block {k} is not Hermitian: max |x - x*| = {defect:e}"
                    )));
                }
                jacobi_eigh(m, k)
            })
            .collect()
    }

    /// Eigendecompositions of the Gram blocks `x_k* x_k`, with roundoff-level
    /// eigenvalues set to exactly zero. Values are `≥ 0` and descending.
    pub fn gram_spectrum(&self) -> Result<Vec<HermitianEigen>> {
        let mut eigs = Vec::with_capacity(self.mats.len());
        for (k, m) in self.mats.iter().enumerate() {
            let g = m.adjoint() * m;
            let g = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
            eigs.push(jacobi_eigh(&g, k)?);
        }
        let top = eigs
            .iter()
            .filter_map(|e| e.values.first().copied())
            .fold(0.0f64, f64::max);
        for (k, e) in eigs.iter_mut().enumerate() {
            for v in e.values.iter_mut() {
                if *v < -GRAM_NEG_TOL * top {
                    return Err(Error::Numerical {
                        block: k,
                        msg: format!("Gram eigenvalue {v:e} is negative beyond roundoff"),
                    });
                }
                if *v <= GRAM_ZERO_FLOOR * top {
                    *v = 0.0;
                }
            }
        }
        Ok(eigs)
    }

    /// `|x|^p` with `|x| = (x*x)^{1/2}`.
    pub fn abs_power(&self, p: f64) -> Result<Operator> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::Contract(format!("abs_power needs 0 < p < ∞, got {p}")));
        }
        let eigs = self.gram_spectrum()?;
        let mats = eigs
            .iter()
            .map(|e| e.recompose(|lambda| if lambda > 0.0 { lambda.powf(p / 2.0) } else { 0.0 }))
            .collect();
        Ok(Operator {
            algebra: self.algebra.clone(),
            mats,
        })
    }

    /// `|x|`.
    pub fn abs(&self) -> Result<Operator> {
        self.abs_power(1.0)
    }

    /// Singular values `(λ, w)` of `|x|` with their block weights: descending
    /// by value, ties in (block, position) order, zeros dropped.
    pub fn singular_pairs(&self) -> Result<Vec<(f64, f64)>> {
        let eigs = self.gram_spectrum()?;
        let mut pairs: Vec<(f64, f64)> = eigs
            .iter()
            .zip(&self.algebra.blocks)
            .flat_map(|(e, b)| e.values.iter().map(move |&v| (v.sqrt(), b.weight)))
            .filter(|&(v, _)| v > 0.0)
            .collect();
        pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        Ok(pairs)
    }
}

fn unitary_factor(g: DMatrix<Complex64>) -> DMatrix<Complex64> {
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..q.ncols() {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..q.nrows() {
            q[(i, j)] *= phase;
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn m2() -> Arc<TraceAlgebra> {
        TraceAlgebra::new("M2", vec![Block::new(2, 1.0)]).unwrap()
    }

    fn diag2(a: f64, b: f64) -> Operator {
        Operator::new(m2(), vec![DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(a), c(b)]))]).unwrap()
    }

    fn mixed() -> Arc<TraceAlgebra> {
        TraceAlgebra::new("mixed", vec![Block::new(1, 0.5), Block::new(2, 2.0)]).unwrap()
    }

    #[test]
    fn invalid_algebras_rejected() {
        assert!(TraceAlgebra::new("empty", vec![]).is_err());
        assert!(TraceAlgebra::new("dim0", vec![Block::new(0, 1.0)]).is_err());
        assert!(TraceAlgebra::new("w0", vec![Block::new(1, 0.0)]).is_err());
        assert!(TraceAlgebra::new("nan", vec![Block::new(1, f64::NAN)]).is_err());
    }

    #[test]
    fn trace_of_identity() {
        assert_eq!(Operator::identity(m2()).trace(), c(2.0));
        assert_eq!(Operator::identity(mixed()).trace(), c(4.5));
        assert_eq!(mixed().total_mass(), 4.5);
    }

    #[test]
    fn diagonal_product() {
        let p = diag2(2.0, 1.0).multiply(&diag2(3.0, 1.0)).unwrap();
        assert_eq!(p.block(0)[(0, 0)], c(6.0));
        assert_eq!(p.block(0)[(1, 1)], c(1.0));
    }

    #[test]
    fn identity_and_involution() {
        let x = Operator::random(mixed(), 7, Ensemble::GeneralComplex);
        let y = Operator::identity(mixed()).multiply(&x).unwrap();
        assert_eq!(y.max_entry_diff(&x).unwrap(), 0.0);
        assert_eq!(x.adjoint().adjoint().max_entry_diff(&x).unwrap(), 0.0);
    }

    #[test]
    fn mismatched_algebras_are_structural() {
        let x = Operator::identity(m2());
        let y = Operator::identity(mixed());
        assert!(matches!(x.add(&y), Err(Error::Structural(_))));
        assert!(matches!(x.multiply(&y), Err(Error::Structural(_))));
        let bad = Operator::new(m2(), vec![DMatrix::zeros(3, 3)]);
        assert!(matches!(bad, Err(Error::Structural(_))));
    }

    #[test]
    fn non_finite_entries_rejected() {
        let mut m = DMatrix::<Complex64>::zeros(2, 2);
        m[(0, 0)] = c(f64::INFINITY);
        assert!(Operator::new(m2(), vec![m]).is_err());
    }

    #[test]
    fn abs_power_cases() {
        let a = diag2(-3.0, 1.0).abs_power(1.0).unwrap();
        assert!((a.block(0)[(0, 0)] - c(3.0)).norm() < 1e-14);
        assert!((a.block(0)[(1, 1)] - c(1.0)).norm() < 1e-14);

        let u = Operator::random(mixed(), 3, Ensemble::Unitary);
        let id = Operator::identity(mixed());
        assert!(u.abs_power(1.7).unwrap().max_entry_diff(&id).unwrap() < 1e-12);

        let x = Operator::random(mixed(), 11, Ensemble::GeneralComplex);
        let sq = x.abs_power(2.0).unwrap();
        let gram = x.adjoint().multiply(&x).unwrap();
        assert!(sq.max_entry_diff(&gram).unwrap() < 1e-10);

        assert!(matches!(x.abs_power(0.0), Err(Error::Contract(_))));
    }

    #[test]
    fn hermitian_eig_rejects_non_hermitian() {
        let x = Operator::random(m2(), 1, Ensemble::GeneralComplex);
        assert!(matches!(x.hermitian_eig(), Err(Error::Contract(_))));
        let h = Operator::random(m2(), 1, Ensemble::Hermitian);
        assert!(h.hermitian_eig().is_ok());
    }

    #[test]
    fn random_is_deterministic() {
        for ens in [Ensemble::GeneralComplex, Ensemble::Hermitian, Ensemble::Positive, Ensemble::Unitary] {
            let a = Operator::random(mixed(), 42, ens);
            let b = Operator::random(mixed(), 42, ens);
            for (x, y) in a.blocks().iter().zip(b.blocks()) {
                for (p, q) in x.iter().zip(y.iter()) {
                    assert_eq!(p.re.to_bits(), q.re.to_bits());
                    assert_eq!(p.im.to_bits(), q.im.to_bits());
                }
            }
        }
    }

    #[test]
    fn ensembles_have_their_shape() {
        let alg = TraceAlgebra::new("m5", vec![Block::new(5, 1.0), Block::new(3, 0.25)]).unwrap();
        for seed in 0..20 {
            let p = Operator::random(alg.clone(), seed, Ensemble::Positive);
            for e in p.hermitian_eig().unwrap() {
                assert!(e.values.iter().all(|&v| v >= -1e-12));
            }
            let u = Operator::random(alg.clone(), seed, Ensemble::Unitary);
            let resid = u
                .adjoint()
                .multiply(&u)
                .unwrap()
                .max_entry_diff(&Operator::identity(alg.clone()))
                .unwrap();
            assert!(resid <= 1e-9);
        }
    }

    #[test]
    fn flat_round_trip() {
        let x = Operator::random(mixed(), 5, Ensemble::GeneralComplex);
        let y = Operator::from_flat(mixed(), &x.to_flat()).unwrap();
        assert_eq!(x.max_entry_diff(&y).unwrap(), 0.0);
    }

    #[test]
    fn singular_pairs_rank_deficient_product_is_clean() {
        let proj = diag2(1.0, 0.0);
        let y = Operator::random(m2(), 9, Ensemble::GeneralComplex);
        let pairs = proj.multiply(&y).unwrap().singular_pairs().unwrap();
        assert_eq!(pairs.len(), 1);
    }
}
