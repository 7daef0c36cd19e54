//! Text grammar for polynomials.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := ('+' | '-')? factor ('*'? factor)*
//! factor := atom '\''*
//! atom   := int ('/' int)? | ('x' | 'h') int | '(' expr ')'
//! ```
//!
//! Example: `x1'*x1 + 2*x2*x2' - 1/3`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::monomial::{Letter, LetterClass, Monomial};
use super::poly::{NcPoly, Rational};
use crate::error::{NcError, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(LetterClass, u32),
    Plus,
    Minus,
    Star,
    Slash,
    Prime,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> NcError {
    NcError::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
                continue;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                col += i - start;
                out.push(Spanned {
                    tok: Tok::Int(s.parse().expect("digits")),
                    line: l0,
                    column: c0,
                });
                continue;
            }
            'x' | 'h' => {
                let class = if c == 'x' {
                    LetterClass::X
                } else {
                    LetterClass::H
                };
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j == start {
                    return Err(err(l0, c0, format!("expected index after '{c}'")));
                }
                let s: String = chars[start..j].iter().collect();
                let index: u32 = s
                    .parse()
                    .map_err(|_| err(l0, c0, format!("index '{s}' too large")))?;
                if index == 0 {
                    return Err(err(l0, c0, "variable indices start at 1"));
                }
                col += j - i;
                i = j;
                out.push(Spanned {
                    tok: Tok::Var(class, index),
                    line: l0,
                    column: c0,
                });
                continue;
            }
            _ => {}
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '\'' => Tok::Prime,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => return Err(err(l0, c0, format!("unexpected character '{other}'"))),
        };
        out.push(Spanned {
            tok,
            line: l0,
            column: c0,
        });
        i += 1;
        col += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    g: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|s| (s.line, s.column))
            .unwrap_or(self.end)
    }

    fn expr(&mut self) -> Result<NcPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<NcPoly> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                negate = true;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(Tok::Int(_)) | Some(Tok::Var(..)) | Some(Tok::LParen) => {
                    acc = &acc * &self.factor()?;
                }
                _ => break,
            }
        }
        Ok(if negate { -&acc } else { acc })
    }

    fn factor(&mut self) -> Result<NcPoly> {
        let mut a = self.atom()?;
        while let Some(Tok::Prime) = self.peek() {
            self.pos += 1;
            a = a.involution();
        }
        Ok(a)
    }

    fn atom(&mut self) -> Result<NcPoly> {
        let (line, column) = self.here();
        let tok = self
            .peek()
            .cloned()
            .ok_or_else(|| err(line, column, "unexpected end of input"))?;
        self.pos += 1;
        match tok {
            Tok::Int(n) => {
                let mut r = Rational::from_integer(n);
                if let Some(Tok::Slash) = self.peek() {
                    self.pos += 1;
                    let (l2, c2) = self.here();
                    match self.peek().cloned() {
                        Some(Tok::Int(d)) if !d.is_zero() => {
                            self.pos += 1;
                            r /= Rational::from_integer(d);
                        }
                        Some(Tok::Int(_)) => return Err(err(l2, c2, "zero denominator")),
                        _ => return Err(err(l2, c2, "expected integer denominator")),
                    }
                }
                Ok(NcPoly::constant(self.g, r))
            }
            Tok::Var(class, index) => {
                if index as usize > self.g {
                    return Err(err(
                        line,
                        column,
                        format!(
                            "index {index} exceeds the ambient variable count {}",
                            self.g
                        ),
                    ));
                }
                let l = Letter {
                    class,
                    transposed: false,
                    index,
                };
                Ok(NcPoly::letter(self.g, l))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                let (l2, c2) = self.here();
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(err(l2, c2, "expected ')'")),
                }
            }
            other => Err(err(line, column, format!("unexpected token {other:?}"))),
        }
    }
}

fn end_position(src: &str) -> (usize, usize) {
    let line = src.matches('\n').count() + 1;
    let last = src.rsplit('\n').next().unwrap_or("");
    (line, last.chars().count() + 1)
}

pub(crate) fn parse_poly(src: &str, g: Option<usize>) -> Result<NcPoly> {
    let toks = lex(src)?;
    let max_index = toks
        .iter()
        .filter_map(|t| match t.tok {
            Tok::Var(_, i) => Some(i as usize),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    let g = g.unwrap_or_else(|| max_index.max(1));
    let mut p = Parser {
        toks,
        pos: 0,
        g,
        end: end_position(src),
    };
    let out = p.expr()?;
    if p.pos < p.toks.len() {
        let (l, c) = p.here();
        return Err(err(l, c, "trailing input"));
    }
    Ok(out)
}

pub(crate) fn parse_monomial(src: &str) -> Result<Monomial> {
    let p = parse_poly(src, None)?;
    let mut it = p.iter();
    match (it.next(), it.next()) {
        (Some((m, c)), None) if c.is_one() => Ok(m.clone()),
        _ => Err(err(1, 1, format!("'{src}' is not a single monomial"))),
    }
}
