//! Dense matrices with [`NcPoly`] entries.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{NcError, Result};
use crate::freealg::NcPoly;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyMatrix {
    g: usize,
    rows: usize,
    cols: usize,
    data: Vec<NcPoly>,
}

impl PolyMatrix {
    pub fn zeros(g: usize, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            g,
            rows,
            cols,
            data: vec![NcPoly::zero(g); rows * cols],
        }
    }

    pub fn identity(g: usize, n: usize) -> Self {
        let mut m = Self::zeros(g, n, n);
        for i in 0..n {
            m[(i, i)] = NcPoly::one(g);
        }
        m
    }

    pub fn from_rows(g: usize, rows: Vec<Vec<NcPoly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(NcError::DimensionMismatch("ragged rows".into()));
        }
        if let Some(bad) = rows.iter().flatten().find(|p| p.vars() != g) {
            return Err(NcError::AmbientMismatch {
                left: g,
                right: bad.vars(),
            });
        }
        Ok(PolyMatrix {
            g,
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Parse a grid given as rows of expressions in the text grammar.
    pub fn parse(g: usize, rows: &[&[&str]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| NcPoly::parse(s, g))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(g, rows)
    }

    pub fn vars(&self) -> usize {
        self.g
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(NcPoly::is_zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &NcPoly)> {
        self.data
            .iter()
            .enumerate()
            .map(move |(k, p)| ((k / self.cols, k % self.cols), p))
    }

    pub fn row(&self, i: usize) -> &[NcPoly] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<NcPoly> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// Matrix transpose composed with the involution on entries.
    pub fn adjoint(&self) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(self.g, self.cols, self.rows);
        for ((i, j), p) in self.entries() {
            out[(j, i)] = p.involution();
        }
        out
    }

    /// `M = M^*`: entry `(i, j)` is the involution of entry `(j, i)`.
    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (i..self.cols).all(|j| self[(i, j)] == self[(j, i)].involution()))
    }

    pub fn has_directions(&self) -> bool {
        self.data.iter().any(NcPoly::has_directions)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(self.g, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out[(a, b)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn multiply(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(NcError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = PolyMatrix::zeros(self.g, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = NcPoly::zero(self.g);
                for k in 0..self.cols {
                    let (a, b) = (&self[(i, k)], &other[(k, j)]);
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.checked_add(&a.multiply(b)?)?;
                    }
                }
                out[(i, j)] = acc;
            }
        }
        Ok(out)
    }

    /// Bracketed grid, one row per line, entries in the text grammar.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for i in 0..self.rows {
            s.push('[');
            for j in 0..self.cols {
                if j > 0 {
                    s.push_str(", ");
                }
                s.push_str(&self[(i, j)].to_string());
            }
            s.push_str("]\n");
        }
        s
    }
}

impl std::ops::Index<(usize, usize)> for PolyMatrix {
    type Output = NcPoly;
    fn index(&self, (i, j): (usize, usize)) -> &NcPoly {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for PolyMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut NcPoly {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjoint_and_symmetry() {
        let m = PolyMatrix::parse(1, &[&["1", "x1'"], &["x1", "x1*x1'"]]).unwrap();
        assert!(m.is_symmetric());
        assert_eq!(m.adjoint(), m);
        let n = PolyMatrix::parse(1, &[&["1", "x1"], &["x1", "0"]]).unwrap();
        assert!(!n.is_symmetric());
    }

    #[test]
    fn product() {
        let l = PolyMatrix::parse(1, &[&["1", "0"], &["x1", "1"]]).unwrap();
        let p = l.multiply(&l.adjoint()).unwrap();
        assert_eq!(
            p,
            PolyMatrix::parse(1, &[&["1", "x1'"], &["x1", "x1*x1' + 1"]]).unwrap()
        );
    }

    #[test]
    fn dump_grid() {
        let m = PolyMatrix::parse(1, &[&["1", "x1'"], &["x1", "0"]]).unwrap();
        assert_eq!(m.dump(), "[1, x1']\n[x1, 0]\n");
    }
}
