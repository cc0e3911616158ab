//! Noncommutative Fourier analysis on finite-dimensional tracial algebras.
//!
//! A [`TraceAlgebra`] is a weighted direct sum of matrix blocks and an
//! [`Operator`] is one matrix per block. On top of that sit the generalized
//! singular value function ([`singular`]), `L^p` and Lorentz norms
//! ([`lorentz`]), Fourier structures of finite groups ([`fourier`]) and
//! Fourier multipliers ([`multiplier`], [`estimate`]).
//!
//! ```
//! use std::sync::Arc;
//! use ncfourier::fourier::{Direction, FourierStructure};
//! use ncfourier::group::{build_group, GroupKind};
//! use ncfourier::lorentz::lp_norm;
//! use ncfourier::{Ensemble, Operator};
//!
//! let g = Arc::new(build_group(&GroupKind::Symmetric3).unwrap());
//! let fs = FourierStructure::new(g, Direction::FunctionSide).unwrap();
//! let x = Operator::random(fs.m().clone(), 7, Ensemble::GeneralComplex);
//! let fx = fs.forward(&x).unwrap();
//! let (a, b) = (lp_norm(&fx, 2.0).unwrap(), lp_norm(&x, 2.0).unwrap());
//! assert!((a - b).abs() < 1e-12 * b);
//! ```

pub mod algebra;
pub mod eig;
pub mod error;
pub mod estimate;
pub mod fourier;
pub mod group;
pub mod lorentz;
pub mod multiplier;
pub mod report;
pub mod singular;
pub mod step;

pub use algebra::{Block, Ensemble, Operator, TraceAlgebra};
pub use error::{Error, Result};
pub use step::StepFunction;

// The concept chapters of the guide run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/trace-algebras.md")]
    mod trace_algebras {}
    #[doc = include_str!("../../../book/src/singular-values.md")]
    mod singular_values {}
    #[doc = include_str!("../../../book/src/lorentz.md")]
    mod lorentz {}
    #[doc = include_str!("../../../book/src/fourier-structures.md")]
    mod fourier_structures {}
    #[doc = include_str!("../../../book/src/multipliers.md")]
    mod multipliers {}
    #[doc = include_str!("../../../book/src/norm-estimation.md")]
    mod norm_estimation {}
}
