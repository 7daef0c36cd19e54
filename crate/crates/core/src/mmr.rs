//! Border vector / middle matrix representations `f = V^* M V` of
//! polynomials quadratic in the direction letters.
//!
//! Border entries lead with a direction letter: `h_j m` or `h_j' m`. They are
//! stratified as
//!
//! * `A_k`:  `h_j m(x)` with `m` analytic of length `k`,
//! * `B_k`:  `h_j m` with `m` of length `k` and not analytic,
//! * `A'_k`: `h_j' m(x')` with `m` antianalytic,
//! * `B'_k`: `h_j' m` with `m` not antianalytic,
//!
//! and stacked `A, B, A', B'`, each by decreasing `k` and lexicographically
//! within a degree.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{NcError, Result};
use crate::freealg::{Monomial, NcPoly, Rational};
use crate::polymatrix::PolyMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StratumKind {
    A,
    B,
    At,
    Bt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Stratum {
    pub kind: StratumKind,
    /// Entry degree minus one.
    pub k: usize,
}

impl Stratum {
    /// Stratum of a direction-leading monomial, `None` otherwise.
    pub fn of(m: &Monomial) -> Option<Stratum> {
        let (&lead, tail) = m.letters().split_first()?;
        if !lead.is_direction() || tail.iter().any(|l| l.is_direction()) {
            return None;
        }
        let kind = match (
            lead.transposed,
            tail.iter().all(|l| l.transposed == lead.transposed),
        ) {
            (false, true) => StratumKind::A,
            (false, false) => StratumKind::B,
            (true, true) => StratumKind::At,
            (true, false) => StratumKind::Bt,
        };
        Some(Stratum {
            kind,
            k: tail.len(),
        })
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            StratumKind::A => "A",
            StratumKind::B => "B",
            StratumKind::At => "A'",
            StratumKind::Bt => "B'",
        };
        write!(f, "{name}_{}", self.k)
    }
}

/// Ordered distinct direction-leading monomials with their strata.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BorderVector {
    g: usize,
    entries: Vec<Monomial>,
    strata: Vec<Stratum>,
}

fn border_key(m: &Monomial, s: &Stratum) -> (StratumKind, std::cmp::Reverse<usize>, Monomial) {
    (s.kind, std::cmp::Reverse(s.k), m.clone())
}

impl BorderVector {
    /// Sort and stratify a set of direction-leading monomials.
    pub fn new(g: usize, monomials: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        let set: BTreeSet<Monomial> = monomials.into_iter().collect();
        let mut tagged = set
            .into_iter()
            .map(|m| match Stratum::of(&m) {
                Some(s) => Ok((m, s)),
                None => Err(NcError::WrongBidegree(m)),
            })
            .collect::<Result<Vec<_>>>()?;
        tagged.sort_by_cached_key(|(m, s)| border_key(m, s));
        let (entries, strata) = tagged.into_iter().unzip();
        Ok(BorderVector { g, entries, strata })
    }

    pub fn vars(&self) -> usize {
        self.g
    }

    pub fn entries(&self) -> &[Monomial] {
        &self.entries
    }

    pub fn strata(&self) -> &[Stratum] {
        &self.strata
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.entries.iter().position(|e| e == m)
    }

    pub fn indices_of(&self, kind: StratumKind) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.strata[i].kind == kind)
            .collect()
    }

    pub fn max_degree(&self) -> usize {
        self.entries.iter().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn select(&self, idx: &[usize]) -> BorderVector {
        BorderVector {
            g: self.g,
            entries: idx.iter().map(|&i| self.entries[i].clone()).collect(),
            strata: idx.iter().map(|&i| self.strata[i]).collect(),
        }
    }

    /// Border as polynomials, for contraction against matrix columns.
    pub fn as_polys(&self) -> Vec<NcPoly> {
        self.entries
            .iter()
            .map(|m| NcPoly::monomial(self.g, m.clone()))
            .collect()
    }

    /// One monomial per line.
    pub fn dump(&self) -> String {
        self.entries.iter().map(|m| format!("{m}\n")).collect()
    }
}

/// The pair `(V, M)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mmr {
    pub border: BorderVector,
    pub middle: PolyMatrix,
}

impl Mmr {
    pub fn expand(&self) -> Result<NcPoly> {
        expand(&self.border, &self.middle)
    }

    pub fn dump(&self) -> String {
        let mut s = String::from("border:\n");
        s.push_str(&self.border.dump());
        s.push_str("middle:\n");
        s.push_str(&self.middle.dump());
        s
    }
}

/// `V^* M V = sum_{r,s} V_r^* M_rs V_s`.
pub fn expand(v: &BorderVector, m: &PolyMatrix) -> Result<NcPoly> {
    if m.nrows() != v.len() || m.ncols() != v.len() {
        return Err(NcError::DimensionMismatch(format!(
            "border of length {} against {}x{} middle matrix",
            v.len(),
            m.nrows(),
            m.ncols()
        )));
    }
    let polys = v.as_polys();
    let mut out = NcPoly::zero(v.vars());
    for ((r, s), e) in m.entries() {
        if e.is_zero() {
            continue;
        }
        let term = polys[r].involution().multiply(e)?.multiply(&polys[s])?;
        out = out.checked_add(&term)?;
    }
    Ok(out)
}

/// Split `w = u^* c v` at its two direction letters: `u^*` runs through the
/// first one, `v` starts at the second.
fn split(w: &Monomial) -> Option<(Monomial, Monomial, Monomial)> {
    let pos: Vec<usize> = w
        .letters()
        .iter()
        .enumerate()
        .filter(|(_, l)| l.is_direction())
        .map(|(i, _)| i)
        .collect();
    if pos.len() != 2 {
        return None;
    }
    let (a, b) = (pos[0], pos[1]);
    let u = w.slice(0, a + 1).involution();
    let c = w.slice(a + 1, b);
    let v = w.slice(b, w.degree());
    Some((u, c, v))
}

/// Minimal representation of a symmetric polynomial homogeneous of degree
/// two in the direction letters.
///
/// Each monomial is split at its direction letters; half of its coefficient
/// goes to slot `(u, v)` with entry `c` and half to `(v, u)` with entry `c^*`.
/// Only border monomials that some term uses are kept, so every row of `M`
/// is nonzero.
pub fn build_mmr(f: &NcPoly) -> Result<Mmr> {
    let g = f.vars();
    let mut slots: BTreeMap<(Monomial, Monomial), NcPoly> = BTreeMap::new();
    let half = Rational::new(1.into(), 2.into());
    for (w, coef) in f.iter() {
        let (u, c, v) = split(w).ok_or_else(|| NcError::NotQuadraticInDirections(w.clone()))?;
        let share = coef * &half;
        slots
            .entry((u.clone(), v.clone()))
            .or_insert_with(|| NcPoly::zero(g))
            .add_term(c.clone(), share.clone());
        slots
            .entry((v, u))
            .or_insert_with(|| NcPoly::zero(g))
            .add_term(c.involution(), share);
    }
    if !f.is_symmetric() {
        return Err(NcError::NotSymmetric);
    }
    slots.retain(|_, p| !p.is_zero());
    let border = BorderVector::new(g, slots.keys().flat_map(|(u, v)| [u.clone(), v.clone()]))?;
    let index: BTreeMap<&Monomial, usize> = border
        .entries()
        .iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let mut middle = PolyMatrix::zeros(g, border.len(), border.len());
    for ((u, v), p) in &slots {
        middle[(index[u], index[v])] = p.clone();
    }
    Ok(Mmr { border, middle })
}

/// Remove scalar-multiple duplicates from a border `(alpha_i m_i)`.
///
/// Entries sharing a monomial merge into one slot: with border `(m, a m, n)`
/// the merged `(m, m)` entry is `p11 + a^2 p22 + a p21 + a p12`.
pub fn collapse_border(
    g: usize,
    scaled: &[(Rational, Monomial)],
    middle: &PolyMatrix,
) -> Result<Mmr> {
    if middle.nrows() != scaled.len() || middle.ncols() != scaled.len() {
        return Err(NcError::DimensionMismatch(format!(
            "border of length {} against {}x{} middle matrix",
            scaled.len(),
            middle.nrows(),
            middle.ncols()
        )));
    }
    let border = BorderVector::new(g, scaled.iter().map(|(_, m)| m.clone()))?;
    let target: Vec<usize> = scaled
        .iter()
        .map(|(_, m)| {
            border
                .index_of(m)
                .expect("border built from these monomials")
        })
        .collect();
    let mut out = PolyMatrix::zeros(g, border.len(), border.len());
    for ((i, j), p) in middle.entries() {
        if p.is_zero() {
            continue;
        }
        let w = &scaled[i].0 * &scaled[j].0;
        let (a, b) = (target[i], target[j]);
        out[(a, b)] = out[(a, b)].checked_add(&p.scale(&w))?;
    }
    Ok(Mmr {
        border,
        middle: out,
    })
}

/// Blocks of `M` aligned to the stacked strata `A, B, A', B'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Blocks {
    pub q1: PolyMatrix,
    pub q2: PolyMatrix,
    pub q4: PolyMatrix,
    pub q5: PolyMatrix,
    pub q6: PolyMatrix,
    pub q8: PolyMatrix,
    /// Rows `A, B` against columns `A', B'`; zero for complex hessians.
    pub cross: PolyMatrix,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub at: Vec<usize>,
    pub bt: Vec<usize>,
}

pub fn block_view(m: &PolyMatrix, v: &BorderVector) -> Result<Blocks> {
    if m.nrows() != v.len() || m.ncols() != v.len() {
        return Err(NcError::DimensionMismatch(format!(
            "border of length {} against {}x{} middle matrix",
            v.len(),
            m.nrows(),
            m.ncols()
        )));
    }
    let a = v.indices_of(StratumKind::A);
    let b = v.indices_of(StratumKind::B);
    let at = v.indices_of(StratumKind::At);
    let bt = v.indices_of(StratumKind::Bt);
    let h_side: Vec<usize> = a.iter().chain(&b).copied().collect();
    let ht_side: Vec<usize> = at.iter().chain(&bt).copied().collect();
    Ok(Blocks {
        q1: m.submatrix(&a, &a),
        q2: m.submatrix(&a, &b),
        q4: m.submatrix(&b, &b),
        q5: m.submatrix(&at, &at),
        q6: m.submatrix(&at, &bt),
        q8: m.submatrix(&bt, &bt),
        cross: m.submatrix(&h_side, &ht_side),
        a,
        b,
        at,
        bt,
    })
}

/// Every border entry has degree at most `floor(d / 2)`.
pub fn check_degree_bound(v: &BorderVector, d: usize) -> bool {
    v.max_degree() <= d / 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::complex_hessian;
    use crate::freealg::rat;

    fn p(s: &str, g: usize) -> NcPoly {
        NcPoly::parse(s, g).unwrap()
    }

    fn m(s: &str) -> Monomial {
        Monomial::parse(s).unwrap()
    }

    fn hess(s: &str, g: usize) -> NcPoly {
        complex_hessian(&p(s, g)).unwrap()
    }

    #[test]
    fn single_slot() {
        let r = build_mmr(&p("h1'*h1", 1)).unwrap();
        assert_eq!(r.border.entries(), &[m("h1")]);
        assert_eq!(r.middle, PolyMatrix::parse(1, &[&["1"]]).unwrap());
    }

    #[test]
    fn quartic_hessian_has_mixed_coupling() {
        let q = hess("x1'*x1*x1'*x1", 1);
        let r = build_mmr(&q).unwrap();
        assert_eq!(r.expand().unwrap(), q);
        let e = r.border.entries();
        assert!(e.contains(&m("h1*x1'*x1")) && e.contains(&m("h1'*x1")) && e.contains(&m("h1")));
        let i = r.border.index_of(&m("h1*x1'*x1")).unwrap();
        let j = r.border.index_of(&m("h1")).unwrap();
        assert!(r.middle[(i, i)].is_zero());
        assert!(!r.middle[(i, j)].is_zero());
        let blocks = block_view(&r.middle, &r.border).unwrap();
        assert_eq!(blocks.q4.nrows(), 1);
        assert!(blocks.q4[(0, 0)].is_zero());
        assert!(!blocks.q2.is_zero());
        assert!(blocks.cross.is_zero());
    }

    #[test]
    fn simple_blocks() {
        let r = build_mmr(&hess("x1'*x1", 1)).unwrap();
        let b = block_view(&r.middle, &r.border).unwrap();
        assert_eq!(b.q1, PolyMatrix::parse(1, &[&["1"]]).unwrap());
        assert_eq!(b.q5.nrows() + b.q2.ncols() + b.q8.nrows(), 0);

        let r = build_mmr(&hess("x1*x1'", 1)).unwrap();
        let b = block_view(&r.middle, &r.border).unwrap();
        assert_eq!(b.q5, PolyMatrix::parse(1, &[&["1"]]).unwrap());
        assert_eq!(b.q1.nrows(), 0);
    }

    #[test]
    fn stratum_tags() {
        assert_eq!(
            Stratum::of(&m("h2*x1*x1")).unwrap(),
            Stratum {
                kind: StratumKind::A,
                k: 2
            }
        );
        assert_eq!(Stratum::of(&m("h1*x1'")).unwrap().kind, StratumKind::B);
        assert_eq!(Stratum::of(&m("h1'*x1'")).unwrap().kind, StratumKind::At);
        assert_eq!(Stratum::of(&m("h1'*x1")).unwrap().kind, StratumKind::Bt);
        assert!(Stratum::of(&m("x1*h1")).is_none());
        let v =
            BorderVector::new(2, [m("h1"), m("h2*x1"), m("h1'*x1"), m("h1*x1"), m("h2")]).unwrap();
        assert_eq!(
            v.entries(),
            &[m("h1*x1"), m("h2*x1"), m("h1"), m("h2"), m("h1'*x1")]
        );
    }

    #[test]
    fn degree_bound() {
        let r = build_mmr(&hess("x1'*x1", 1)).unwrap();
        assert!(check_degree_bound(&r.border, 2));
        let r = build_mmr(&hess("x1'*x1'*x1*x1", 1)).unwrap();
        assert_eq!(r.border.max_degree(), 2);
        assert!(check_degree_bound(&r.border, 4));
        let v = BorderVector::new(1, [m("h1*x1*x1")]).unwrap();
        assert!(!check_degree_bound(&v, 4));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            build_mmr(&p("h1'*h1*x1", 1)),
            Err(NcError::NotSymmetric)
        ));
        assert!(matches!(
            build_mmr(&p("h1' + h1", 1)),
            Err(NcError::NotQuadraticInDirections(_))
        ));
        assert!(matches!(
            build_mmr(&p("x1'*x1", 1)),
            Err(NcError::NotQuadraticInDirections(_))
        ));
    }

    #[test]
    fn general_quadratic_patterns() {
        // h h and h' h' terms land in the cross block
        let f = p("h1'*x1'*h1' + h1*x1*h1 + h1'*h1", 1);
        let r = build_mmr(&f).unwrap();
        assert_eq!(r.expand().unwrap(), f);
        let b = block_view(&r.middle, &r.border).unwrap();
        assert!(!b.cross.is_zero());
    }

    #[test]
    fn scalar_multiple_merge() {
        // border (h1, 3 h1, h1*x1) with generic middle entries
        let a = rat(3, 1);
        let mid = PolyMatrix::parse(
            1,
            &[
                &["x1'*x1", "x1", "x1'"],
                &["x1'", "2", "1"],
                &["x1", "1", "5"],
            ],
        )
        .unwrap();
        let scaled = vec![
            (rat(1, 1), m("h1")),
            (a.clone(), m("h1")),
            (rat(1, 1), m("h1*x1")),
        ];
        let r = collapse_border(1, &scaled, &mid).unwrap();
        assert_eq!(r.border.entries(), &[m("h1*x1"), m("h1")]);
        let (p11, p12, p21, p22) = (&mid[(0, 0)], &mid[(0, 1)], &mid[(1, 0)], &mid[(1, 1)]);
        let expect = &(&(p11 + &p22.scale(&(&a * &a))) + &p21.scale(&a)) + &p12.scale(&a);
        assert_eq!(r.middle[(1, 1)], expect);
        assert_eq!(r.middle[(1, 0)], &mid[(0, 2)] + &mid[(1, 2)].scale(&a));
        assert_eq!(r.middle[(0, 0)], mid[(2, 2)]);
    }
}
