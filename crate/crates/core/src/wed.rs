//! Wed classes: the orbits of monomials under moving direction letters.
//!
//! A complex hessian is a union of complete Levi classes with equal
//! coefficients, and a first directional derivative is a union of complete
//! 1-classes with equal coefficients. Both recognitions reduce to grouping
//! monomials by the word obtained after replacing direction letters with
//! their variables.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{NcError, Result};
use crate::freealg::{Monomial, NcPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WedKind {
    /// One `h` and one `h'`, moved independently among `x` and `x'` slots.
    Levi,
    /// A single direction letter moved among all slots.
    One,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedClass {
    pub representative: Monomial,
    pub members: BTreeSet<Monomial>,
    pub kind: WedKind,
}

impl WedClass {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.members.contains(m)
    }
}

/// Why a polynomial fails a wed-class recognition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum WedViolation {
    /// Monomial with the wrong number or kind of direction letters.
    Bidegree(Monomial),
    /// A class member absent from the polynomial.
    MissingMember {
        missing: Monomial,
        class_of: Monomial,
    },
    /// Two members of one class with different coefficients.
    UnequalCoefficients {
        member: Monomial,
        class_of: Monomial,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Recognition {
    Holds,
    Fails(WedViolation),
}

impl Recognition {
    pub fn holds(&self) -> bool {
        matches!(self, Recognition::Holds)
    }

    pub fn witness(&self) -> Option<&WedViolation> {
        match self {
            Recognition::Holds => None,
            Recognition::Fails(v) => Some(v),
        }
    }
}

fn levi_members(base: &Monomial) -> BTreeSet<Monomial> {
    let w = base.letters();
    let plain: Vec<usize> = (0..w.len()).filter(|&i| !w[i].transposed).collect();
    let trans: Vec<usize> = (0..w.len()).filter(|&i| w[i].transposed).collect();
    let mut out = BTreeSet::new();
    for &a in &plain {
        for &b in &trans {
            let mut word = w.to_vec();
            word[a] = word[a].to_direction();
            word[b] = word[b].to_direction();
            out.insert(Monomial::new(word));
        }
    }
    out
}

fn one_members(base: &Monomial) -> BTreeSet<Monomial> {
    (0..base.degree())
        .map(|i| base.with_letter(i, base.letters()[i].to_direction()))
        .collect()
}

fn has_levi_bidegree(m: &Monomial) -> bool {
    m.direction_bidegree() == (1, 1)
}

/// All monomials Levi-wed to `m`: its one `h` placed at any untransposed slot
/// and its one `h'` at any transposed slot of the underlying word.
pub fn levi_class(m: &Monomial) -> Result<WedClass> {
    if !has_levi_bidegree(m) {
        return Err(NcError::WrongBidegree(m.clone()));
    }
    Ok(WedClass {
        representative: m.clone(),
        members: levi_members(&m.strip_directions()),
        kind: WedKind::Levi,
    })
}

/// All monomials 1-wed to `m`: its single direction letter placed at any slot.
pub fn one_class(m: &Monomial) -> Result<WedClass> {
    if m.h_degree() != 1 {
        return Err(NcError::WrongBidegree(m.clone()));
    }
    Ok(WedClass {
        representative: m.clone(),
        members: one_members(&m.strip_directions()),
        kind: WedKind::One,
    })
}

/// Shared check: group monomials by underlying word, then require every class
/// complete with one coefficient. Reports the graded-lex least offending member.
fn check_classes(p: &NcPoly, members_of: impl Fn(&Monomial) -> BTreeSet<Monomial>) -> Recognition {
    let mut groups: BTreeMap<Monomial, Vec<&Monomial>> = BTreeMap::new();
    for (m, _) in p.iter() {
        groups.entry(m.strip_directions()).or_default().push(m);
    }
    let mut worst: Option<(Monomial, WedViolation)> = None;
    let mut note = |key: Monomial, v: WedViolation| {
        if worst.as_ref().is_none_or(|(k, _)| key < *k) {
            worst = Some((key, v));
        }
    };
    for (base, present) in &groups {
        let class_of = present[0].clone();
        let c0 = p.coeff(&class_of);
        for member in members_of(base) {
            match p.terms().get(&member) {
                None => note(
                    member.clone(),
                    WedViolation::MissingMember {
                        missing: member,
                        class_of: class_of.clone(),
                    },
                ),
                Some(c) if *c != c0 => note(
                    member.clone(),
                    WedViolation::UnequalCoefficients {
                        member,
                        class_of: class_of.clone(),
                    },
                ),
                Some(_) => {}
            }
        }
    }
    match worst {
        None => Recognition::Holds,
        Some((_, v)) => Recognition::Fails(v),
    }
}

/// Recognize complex hessians: exactly one `h` and one `h'` per monomial, and
/// every Levi class present in full with a common coefficient.
pub fn is_complex_hessian(q: &NcPoly) -> Recognition {
    if let Some(bad) = q.terms().keys().find(|m| !has_levi_bidegree(m)) {
        return Recognition::Fails(WedViolation::Bidegree(bad.clone()));
    }
    check_classes(q, levi_members)
}

/// Recognize first directional derivatives of analytic (or antianalytic)
/// polynomials.
pub fn is_directional_derivative(f: &NcPoly) -> Result<Recognition> {
    if !f.is_analytic() && !f.is_antianalytic() {
        return Err(NcError::MixedLetters);
    }
    if let Some(bad) = f.terms().keys().find(|m| m.h_degree() != 1) {
        return Ok(Recognition::Fails(WedViolation::Bidegree(bad.clone())));
    }
    Ok(check_classes(f, one_members))
}

/// The `F` with `F(0) = 0` whose first derivative is `f`.
///
/// A 1-class over a base word `m` with common coefficient `c` integrates to
/// `c * m`: differentiating `c * m` yields one copy of each class member.
pub fn antiderivative(f: &NcPoly) -> Result<NcPoly> {
    // The 1-class structure makes sense for mixed words too, so unlike
    // `is_directional_derivative` no analytic restriction is imposed here.
    let single = f.terms().keys().all(|m| m.h_degree() == 1);
    if !single || !check_classes(f, one_members).holds() {
        return Err(NcError::NotADerivative);
    }
    let mut out = NcPoly::zero(f.vars());
    let mut seen = BTreeSet::new();
    for (m, c) in f.iter() {
        let base = m.strip_directions();
        if seen.insert(base.clone()) {
            out.add_term(base, c.clone());
        }
    }
    Ok(out)
}

/// Number of members a Levi class over `base` has.
pub fn levi_class_size(base: &Monomial) -> usize {
    let t = base.letters().iter().filter(|l| l.transposed).count();
    (base.degree() - t) * t
}
