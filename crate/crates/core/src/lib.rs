//! Certified two-pole Lempert and Carathéodory functions on the bidisc.
//!
//! For a base point `z` and two distinct poles `p`, `q` in the bidisc, the
//! Carathéodory function `c(z; p, q)` and the Lempert function `l(z; p, q)`
//! coincide. [`solver::solve`] computes the common value and returns a
//! [`solver::Certificate`]: an analytic disc through `z`, `p`, `q` realizing
//! the upper bound and a holomorphic function vanishing at both poles
//! realizing the lower bound, together with the residuals that tie them to
//! the reported number. The pluricomplex Green function, squeezed between the
//! two, takes the same value.
//!
//! The [`oracle`] module re-derives both bounds by brute-force search over
//! explicit function families, without using the solver.
//!
//! Complex numbers are [`Complex`] (`f64` pairs). Logarithms are natural.

pub mod cli;
pub mod error;
pub mod extremal;
pub(crate) mod lsq;
pub mod mobius;
pub mod oracle;
pub mod pick;
pub mod regions;
pub mod sample;
pub mod selftest;
pub mod solver;

pub use error::{Error, Result};
pub use extremal::{ExtremalParams, LeftInverse};
pub use mobius::{BidiscPoint, BlaschkeProduct, DiscPoint, UnimodularScalar};
pub use regions::{Classification, PolePair, RegionLabel};
pub use solver::{solve, Certificate, Problem, SolverConfig};

pub use num_complex::Complex64 as Complex;
