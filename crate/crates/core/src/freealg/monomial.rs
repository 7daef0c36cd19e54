use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Variable letters `x` versus direction letters `h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LetterClass {
    X,
    H,
}

/// One of the `4g` generators `x_i`, `x_i'`, `h_i`, `h_i'`.
///
/// Field order gives the letter order
/// `x1 < .. < xg < x1' < .. < xg' < h1 < .. < hg < h1' < .. < hg'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub class: LetterClass,
    pub transposed: bool,
    /// 1-based variable index.
    pub index: u32,
}

impl Letter {
    pub const fn x(index: u32) -> Self {
        Letter {
            class: LetterClass::X,
            transposed: false,
            index,
        }
    }

    pub const fn xt(index: u32) -> Self {
        Letter {
            class: LetterClass::X,
            transposed: true,
            index,
        }
    }

    pub const fn h(index: u32) -> Self {
        Letter {
            class: LetterClass::H,
            transposed: false,
            index,
        }
    }

    pub const fn ht(index: u32) -> Self {
        Letter {
            class: LetterClass::H,
            transposed: true,
            index,
        }
    }

    pub fn transpose(self) -> Self {
        Letter {
            transposed: !self.transposed,
            ..self
        }
    }

    pub fn is_direction(self) -> bool {
        self.class == LetterClass::H
    }

    /// The direction letter sitting in the same slot (`x_i -> h_i`, `x_i' -> h_i'`).
    pub fn to_direction(self) -> Self {
        Letter {
            class: LetterClass::H,
            ..self
        }
    }

    /// The variable letter sitting in the same slot (`h_i -> x_i`, `h_i' -> x_i'`).
    pub fn to_variable(self) -> Self {
        Letter {
            class: LetterClass::X,
            ..self
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.class {
            LetterClass::X => 'x',
            LetterClass::H => 'h',
        };
        write!(f, "{}{}", c, self.index)?;
        if self.transposed {
            f.write_str("'")?;
        }
        Ok(())
    }
}

/// A word in the free semigroup; the empty word is the unit monomial.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<Letter>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(word: Vec<Letter>) -> Self {
        Monomial(word)
    }

    pub fn letter(l: Letter) -> Self {
        Monomial(vec![l])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn h_degree(&self) -> usize {
        self.0.iter().filter(|l| l.is_direction()).count()
    }

    /// Counts of `(h, h')` letters.
    pub fn direction_bidegree(&self) -> (usize, usize) {
        self.0
            .iter()
            .filter(|l| l.is_direction())
            .fold(
                (0, 0),
                |(a, b), l| {
                    if l.transposed {
                        (a, b + 1)
                    } else {
                        (a + 1, b)
                    }
                },
            )
    }

    pub fn max_index(&self) -> u32 {
        self.0.iter().map(|l| l.index).max().unwrap_or(0)
    }

    pub fn concat(&self, other: &Monomial) -> Monomial {
        let mut w = Vec::with_capacity(self.0.len() + other.0.len());
        w.extend_from_slice(&self.0);
        w.extend_from_slice(&other.0);
        Monomial(w)
    }

    /// Reverse the word and transpose every letter.
    pub fn involution(&self) -> Monomial {
        Monomial(self.0.iter().rev().map(|l| l.transpose()).collect())
    }

    pub fn slice(&self, start: usize, end: usize) -> Monomial {
        Monomial(self.0[start..end].to_vec())
    }

    /// Copy with the letter at `pos` replaced.
    pub fn with_letter(&self, pos: usize, l: Letter) -> Monomial {
        let mut w = self.0.clone();
        w[pos] = l;
        Monomial(w)
    }

    /// Replace every direction letter by the variable letter in the same slot.
    pub fn strip_directions(&self) -> Monomial {
        Monomial(self.0.iter().map(|l| l.to_variable()).collect())
    }

    pub fn is_analytic(&self) -> bool {
        self.0.iter().all(|l| !l.transposed)
    }

    pub fn is_antianalytic(&self) -> bool {
        self.0.iter().all(|l| l.transposed)
    }

    /// Every transposed letter precedes every untransposed letter.
    pub fn is_hereditary(&self) -> bool {
        let first_plain = self.0.iter().position(|l| !l.transposed);
        match first_plain {
            None => true,
            Some(p) => self.0[p..].iter().all(|l| !l.transposed),
        }
    }

    /// Every untransposed letter precedes every transposed letter.
    pub fn is_antihereditary(&self) -> bool {
        let first_t = self.0.iter().position(|l| l.transposed);
        match first_t {
            None => true,
            Some(p) => self.0[p..].iter().all(|l| l.transposed),
        }
    }

    /// Parse a bare monomial such as `x1'*h2*x1` or `1`.
    pub fn parse(s: &str) -> crate::Result<Monomial> {
        crate::freealg::parse::parse_monomial(s)
    }
}

/// Graded lexicographic order: shorter words first, ties broken letter by letter.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Monomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Monomial::parse(&s).map_err(serde::de::Error::custom)
    }
}
