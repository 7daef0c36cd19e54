//! Noncommutative differentiation.
//!
//! Every derivative here is a linearization: substitute `x -> x + t h` (and
//! `x' -> x' + s h'`), expand without commuting anything, and read off a
//! coefficient. On a single monomial that amounts to replacing some of its
//! variable letters by the direction letter in the same slot.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{NcError, Result};
use crate::freealg::{Letter, LetterClass, Monomial, NcPoly, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DerivativeKind {
    /// Directional derivative in `x_j`, direction `h_j`.
    WrtX(u32),
    /// Directional derivative in `x_j'`, direction `h_j'`.
    WrtXT(u32),
    Full,
    ComplexHessian,
    FullHessian,
    Order(usize),
}

fn require_direction_free(p: &NcPoly) -> Result<()> {
    if p.has_directions() {
        Err(NcError::AlreadyDirectional)
    } else {
        Ok(())
    }
}

/// Sum over positions selected by `pick` of the monomial with that one letter
/// swapped for its direction letter.
fn linearize(p: &NcPoly, pick: impl Fn(Letter) -> bool) -> NcPoly {
    let mut out = NcPoly::zero(p.vars());
    for (m, c) in p.iter() {
        for (pos, &l) in m.letters().iter().enumerate() {
            if l.class == LetterClass::X && pick(l) {
                out.add_term(m.with_letter(pos, l.to_direction()), c.clone());
            }
        }
    }
    out
}

fn check_index(p: &NcPoly, j: u32) -> Result<()> {
    if j == 0 || j as usize > p.vars() {
        return Err(NcError::IndexOutOfAmbient {
            index: j as usize,
            g: p.vars(),
        });
    }
    Ok(())
}

/// `p_{x_j}[h_j]`; occurrences of `x_j'` are untouched.
pub fn deriv_xj(p: &NcPoly, j: u32) -> Result<NcPoly> {
    require_direction_free(p)?;
    check_index(p, j)?;
    Ok(linearize(p, |l| !l.transposed && l.index == j))
}

/// `p_{x_j'}[h_j']`.
pub fn deriv_xtj(p: &NcPoly, j: u32) -> Result<NcPoly> {
    require_direction_free(p)?;
    check_index(p, j)?;
    Ok(linearize(p, |l| l.transposed && l.index == j))
}

/// `p'(x)[h] = p_x[h] + p_{x'}[h']`.
pub fn full_derivative(p: &NcPoly) -> Result<NcPoly> {
    require_direction_free(p)?;
    Ok(linearize(p, |_| true))
}

/// Pairs of distinct slots `(a, b)` with `a` selected by `first` and `b` by `second`.
fn bilinearize(
    p: &NcPoly,
    first: impl Fn(Letter) -> bool,
    second: impl Fn(Letter) -> bool,
    ordered: bool,
) -> NcPoly {
    let mut out = NcPoly::zero(p.vars());
    for (m, c) in p.iter() {
        let w = m.letters();
        for a in 0..w.len() {
            if !first(w[a]) {
                continue;
            }
            let start = if ordered { 0 } else { a + 1 };
            for b in start..w.len() {
                if b == a || !second(w[b]) {
                    continue;
                }
                let mut word = w.to_vec();
                word[a] = w[a].to_direction();
                word[b] = w[b].to_direction();
                out.add_term(Monomial::new(word), c.clone());
            }
        }
    }
    out
}

/// The complex hessian `d^2/ds dt p(x + t h, x' + s h')` at zero.
///
/// Each output monomial carries exactly one `h_j` and one `h_k'`.
pub fn complex_hessian(p: &NcPoly) -> Result<NcPoly> {
    require_direction_free(p)?;
    Ok(bilinearize(
        p,
        |l| l.class == LetterClass::X && !l.transposed,
        |l| l.class == LetterClass::X && l.transposed,
        true,
    ))
}

/// `d^2/dt^2 p(x + t h, x')` at zero.
pub fn pure_x_hessian(p: &NcPoly) -> Result<NcPoly> {
    require_direction_free(p)?;
    let plain = |l: Letter| l.class == LetterClass::X && !l.transposed;
    Ok(bilinearize(p, plain, plain, false).scale(&Rational::from_integer(2.into())))
}

/// `d^2/ds^2 p(x, x' + s h')` at zero.
pub fn pure_xt_hessian(p: &NcPoly) -> Result<NcPoly> {
    require_direction_free(p)?;
    let tr = |l: Letter| l.class == LetterClass::X && l.transposed;
    Ok(bilinearize(p, tr, tr, false).scale(&Rational::from_integer(2.into())))
}

/// `p''(x)[h]`, the second derivative along `x + t h, x' + t h'`.
pub fn full_hessian(p: &NcPoly) -> Result<NcPoly> {
    require_direction_free(p)?;
    nth_derivative(p, 2)
}

/// `l!` times the coefficient of `t^l` in `p(x + t h, x' + t h')`.
///
/// Direction letters already present are treated as constants. Orders above
/// the degree give zero.
pub fn nth_derivative(p: &NcPoly, order: usize) -> Result<NcPoly> {
    let g = p.vars();
    if order == 0 {
        return Ok(p.clone());
    }
    let fact: BigInt = (1..=order).map(BigInt::from).product();
    let mut out = NcPoly::zero(g);
    for (m, c) in p.iter() {
        let slots: Vec<usize> = m
            .letters()
            .iter()
            .enumerate()
            .filter(|(_, l)| l.class == LetterClass::X)
            .map(|(i, _)| i)
            .collect();
        if slots.len() < order {
            continue;
        }
        let mut chosen = Vec::with_capacity(order);
        each_subset(&slots, order, 0, &mut chosen, &mut |sel| {
            let mut word = m.letters().to_vec();
            for &i in sel {
                word[i] = word[i].to_direction();
            }
            out.add_term(Monomial::new(word), c.clone());
        });
    }
    Ok(out.scale(&Rational::from_integer(fact)))
}

fn each_subset(
    items: &[usize],
    k: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if chosen.len() == k {
        f(chosen);
        return;
    }
    for i in start..items.len() {
        if items.len() - i < k - chosen.len() {
            break;
        }
        chosen.push(items[i]);
        each_subset(items, k, i + 1, chosen, f);
        chosen.pop();
    }
}

pub fn derivative(p: &NcPoly, kind: DerivativeKind) -> Result<NcPoly> {
    match kind {
        DerivativeKind::WrtX(j) => deriv_xj(p, j),
        DerivativeKind::WrtXT(j) => deriv_xtj(p, j),
        DerivativeKind::Full => full_derivative(p),
        DerivativeKind::ComplexHessian => complex_hessian(p),
        DerivativeKind::FullHessian => full_hessian(p),
        DerivativeKind::Order(l) => nth_derivative(p, l),
    }
}
