//! The free algebra on `x, x', h, h'` with involution, exact rational
//! coefficients, a text grammar, and matrix-tuple evaluation.

mod eval;
mod monomial;
pub(crate) mod parse;
mod poly;

pub use eval::{direct_sum, evaluate, evaluate_with, MatrixTuple};
pub use monomial::{Letter, LetterClass, Monomial};
pub use poly::{
    format_rational, parse_rational, rat, rat_to_f64, rational_serde, NcPoly, Rational, Shape,
};

/// Product with ambient check.
pub fn multiply(a: &NcPoly, b: &NcPoly) -> crate::Result<NcPoly> {
    a.multiply(b)
}

pub fn involution(p: &NcPoly) -> NcPoly {
    p.involution()
}

pub fn classify_shape(p: &NcPoly) -> Shape {
    p.shape()
}
