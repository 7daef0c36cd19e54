//! Noncommutative polynomial calculus and plurisubharmonicity certificates.
//!
//! Polynomials live in the free algebra on `x1..xg`, their transposes, and the
//! direction letters `h1..hg`, `h1'..hg'`. The pipeline runs
//! differentiation ([`calculus`]), middle-matrix representation ([`mmr`]),
//! exact symbolic LDL^T ([`ldlt`]), and finally [`classify::decide_plush`],
//! which either returns an exact decomposition
//! `p = sum d_i f_i' f_i + sum e_j k_j k_j' + F + F'` with analytic pieces, or
//! a numeric counterexample.

pub mod calculus;
pub mod classify;
pub mod cli;
pub mod error;
pub mod freealg;
pub mod ldlt;
pub mod mmr;
pub mod numeval;
pub mod polymatrix;
pub mod wed;

pub use error::{NcError, Result};
pub use freealg::{Letter, MatrixTuple, Monomial, NcPoly, Rational};
