use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::monomial::{Letter, Monomial};
use crate::error::{NcError, Result};

/// Exact coefficient field.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Render a rational as `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

/// Serde adapter storing rationals as `p/q` strings.
pub mod rational_serde {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
    }

    /// The same for a `Vec<Rational>`.
    pub mod vec {
        use super::super::{format_rational, parse_rational, Rational};
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            v.iter()
                .map(format_rational)
                .collect::<Vec<_>>()
                .serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            Vec::<String>::deserialize(d)?
                .into_iter()
                .map(|s| {
                    parse_rational(&s)
                        .ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
                })
                .collect()
        }
    }
}

/// Shape predicates aggregated over every monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shape {
    pub analytic: bool,
    pub antianalytic: bool,
    pub hereditary: bool,
    pub antihereditary: bool,
    /// Neither analytic nor antianalytic.
    pub mixed: bool,
}

/// Element of the free algebra over the rationals in `x, x', h, h'` with `g` variables per class.
///
/// Terms are kept canonical: no zero coefficients, keys in graded-lex order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NcPoly {
    g: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl NcPoly {
    pub fn zero(g: usize) -> Self {
        NcPoly {
            g,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(g: usize) -> Self {
        Self::constant(g, Rational::one())
    }

    pub fn constant(g: usize, c: Rational) -> Self {
        Self::term(g, Monomial::one(), c)
    }

    pub fn term(g: usize, m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(g);
        p.add_term(m, c);
        p
    }

    pub fn monomial(g: usize, m: Monomial) -> Self {
        Self::term(g, m, Rational::one())
    }

    pub fn letter(g: usize, l: Letter) -> Self {
        Self::monomial(g, Monomial::letter(l))
    }

    pub fn x(g: usize, i: u32) -> Self {
        Self::letter(g, Letter::x(i))
    }

    pub fn xt(g: usize, i: u32) -> Self {
        Self::letter(g, Letter::xt(i))
    }

    /// Build from `(monomial, coefficient)` pairs, validating letter indices.
    pub fn from_terms(
        g: usize,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Result<Self> {
        let mut p = Self::zero(g);
        for (m, c) in terms {
            let idx = m.max_index() as usize;
            if idx > g || m.letters().iter().any(|l| l.index == 0) {
                return Err(NcError::IndexOutOfAmbient { index: idx, g });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn vars(&self) -> usize {
        self.g
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.contains_key(m)
    }

    /// Add `c * m` in place, dropping the key if the coefficient cancels.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one())
    }

    /// Rational value if the polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn h_degree(&self) -> usize {
        self.terms.keys().map(Monomial::h_degree).max().unwrap_or(0)
    }

    pub fn has_directions(&self) -> bool {
        self.terms.keys().any(|m| m.h_degree() > 0)
    }

    pub fn scale(&self, c: &Rational) -> NcPoly {
        if c.is_zero() {
            return NcPoly::zero(self.g);
        }
        NcPoly {
            g: self.g,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    fn check_ambient(&self, other: &NcPoly) -> Result<()> {
        if self.g != other.g {
            return Err(NcError::AmbientMismatch {
                left: self.g,
                right: other.g,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &NcPoly) -> Result<NcPoly> {
        self.check_ambient(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &NcPoly) -> Result<NcPoly> {
        self.check_ambient(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    /// Bilinear product; monomials multiply by concatenation.
    pub fn multiply(&self, other: &NcPoly) -> Result<NcPoly> {
        self.check_ambient(other)?;
        let mut out = NcPoly::zero(self.g);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.concat(b), ca * cb);
            }
        }
        Ok(out)
    }

    /// Anti-automorphism: reverse each word, transpose each letter.
    pub fn involution(&self) -> NcPoly {
        NcPoly {
            g: self.g,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.involution(), c.clone()))
                .collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.terms
            .iter()
            .all(|(m, c)| self.terms.get(&m.involution()) == Some(c))
    }

    pub fn shape(&self) -> Shape {
        let analytic = self.terms.keys().all(Monomial::is_analytic);
        let antianalytic = self.terms.keys().all(Monomial::is_antianalytic);
        Shape {
            analytic,
            antianalytic,
            hereditary: self.terms.keys().all(Monomial::is_hereditary),
            antihereditary: self.terms.keys().all(Monomial::is_antihereditary),
            mixed: !analytic && !antianalytic,
        }
    }

    pub fn is_analytic(&self) -> bool {
        self.terms.keys().all(Monomial::is_analytic)
    }

    pub fn is_antianalytic(&self) -> bool {
        self.terms.keys().all(Monomial::is_antianalytic)
    }

    /// Terms for which `keep` returns true.
    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> NcPoly {
        NcPoly {
            g: self.g,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Largest absolute coefficient, as a float.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms
            .values()
            .map(|c| rat_to_f64(&c.abs()))
            .fold(0.0, f64::max)
    }

    pub fn parse(src: &str, g: usize) -> Result<NcPoly> {
        super::parse::parse_poly(src, Some(g))
    }

    /// Parse, taking the ambient `g` from the largest index mentioned (at least 1).
    pub fn parse_infer(src: &str) -> Result<NcPoly> {
        super::parse::parse_poly(src, None)
    }
}

impl fmt::Display for NcPoly {
    /// Highest graded-lex term first; round-trips through [`NcPoly::parse`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                f.write_str(&format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{}", format_rational(&mag), m)?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    vars: usize,
    expr: String,
}

impl Serialize for NcPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            vars: self.g,
            expr: self.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NcPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PolyRepr::deserialize(d)?;
        NcPoly::parse(&r.expr, r.vars).map_err(serde::de::Error::custom)
    }
}

// Operator forms panic on ambient mismatch; use the `checked_*` / `multiply` methods to recover.

impl Add for &NcPoly {
    type Output = NcPoly;
    fn add(self, rhs: &NcPoly) -> NcPoly {
        self.checked_add(rhs)
            .expect("ambient mismatch in NcPoly addition")
    }
}

impl Sub for &NcPoly {
    type Output = NcPoly;
    fn sub(self, rhs: &NcPoly) -> NcPoly {
        self.checked_sub(rhs)
            .expect("ambient mismatch in NcPoly subtraction")
    }
}

impl Mul for &NcPoly {
    type Output = NcPoly;
    fn mul(self, rhs: &NcPoly) -> NcPoly {
        self.multiply(rhs)
            .expect("ambient mismatch in NcPoly product")
    }
}

impl Neg for &NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        self.scale(&-Rational::one())
    }
}

impl Add for NcPoly {
    type Output = NcPoly;
    fn add(self, rhs: NcPoly) -> NcPoly {
        &self + &rhs
    }
}

impl Sub for NcPoly {
    type Output = NcPoly;
    fn sub(self, rhs: NcPoly) -> NcPoly {
        &self - &rhs
    }
}

impl Mul for NcPoly {
    type Output = NcPoly;
    fn mul(self, rhs: NcPoly) -> NcPoly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, g: usize) -> NcPoly {
        NcPoly::parse(s, g).unwrap()
    }

    #[test]
    fn product_is_concatenation() {
        assert_eq!(&p("x1", 1) * &p("x1'", 1), p("x1*x1'", 1));
        assert_eq!(&p("x1 + x2", 2) * &p("x1", 2), p("x1*x1 + x2*x1", 2));
    }

    #[test]
    fn analytic_closed_under_product() {
        let a = p("x1*x2*x4 + x3*x1", 4);
        assert!(a.shape().analytic && !a.is_symmetric());
        assert!((&a * &a).shape().analytic);
    }

    #[test]
    fn mismatched_ambient_fails() {
        let err = p("x1", 1).multiply(&p("x1", 2)).unwrap_err();
        assert_eq!(err, NcError::AmbientMismatch { left: 1, right: 2 });
    }

    #[test]
    fn involution_examples() {
        assert_eq!(p("x1*x2", 2).involution(), p("x2'*x1'", 2));
        let s = p("x1*x1' + x2'*x2", 2);
        assert_eq!(s.involution(), s);
        assert!(s.is_symmetric());
        assert_eq!(NcPoly::zero(3).involution(), NcPoly::zero(3));
    }

    #[test]
    fn shapes() {
        let anti = p("x2'*x1' + 4*x3'", 3).shape();
        assert!(anti.antianalytic && !anti.analytic);
        let her = p("x1'*x1", 1).shape();
        assert!(her.hereditary && !her.analytic && !her.antihereditary && her.mixed);
        let ah = p("x1*x1'", 1).shape();
        assert!(ah.antihereditary && !ah.hereditary);
    }

    #[test]
    fn cancellation_keeps_canonical_form() {
        let a = p("x1*x2 + 1", 2);
        let b = &a - &p("x1*x2", 2);
        assert_eq!(b, NcPoly::one(2));
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn printer_order_and_signs() {
        let q = p("-1/3 + 2*x2*x2' + x1'*x1", 2);
        assert_eq!(q.to_string(), "x1'*x1 + 2*x2*x2' - 1/3");
        assert_eq!(p("-x1", 1).to_string(), "-x1");
        assert_eq!(NcPoly::zero(1).to_string(), "0");
    }
}
