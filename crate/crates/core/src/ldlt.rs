//! Exact `L D L^*` factorization of symmetric polynomial matrices with
//! constant scalar pivots.
//!
//! At every step the current Schur complement is searched for a nonzero
//! constant diagonal entry `c`; it is moved to the front and eliminated,
//! leaving `C - b c^{-1} b^*`. Since `c` is a scalar the complement stays a
//! matrix of polynomials. When the complement is zero the remaining pivots
//! are zero; when it is nonzero without a constant diagonal entry the
//! factorization stops with an [`Obstruction`].

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{NcError, Result};
use crate::freealg::{format_rational, rational_serde, NcPoly, Rational};
use crate::polymatrix::PolyMatrix;

/// `P M P^T = L diag(d) L^*` with `L` unit lower triangular.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LdltFactorization {
    /// `perm[k]` is the original row placed at position `k`.
    pub perm: Vec<usize>,
    pub l: PolyMatrix,
    #[serde(with = "rational_serde::vec")]
    pub d: Vec<Rational>,
}

/// Nonzero Schur complement without a usable pivot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obstruction {
    pub residual: PolyMatrix,
    /// Original indices of the residual rows.
    pub indices: Vec<usize>,
    /// Pivots taken before getting stuck.
    #[serde(with = "rational_serde::vec")]
    pub pivots: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum LdltOutcome {
    Factored(LdltFactorization),
    Obstruction(Obstruction),
}

impl LdltOutcome {
    pub fn factored(&self) -> Option<&LdltFactorization> {
        match self {
            LdltOutcome::Factored(f) => Some(f),
            LdltOutcome::Obstruction(_) => None,
        }
    }

    pub fn dump(&self) -> String {
        match self {
            LdltOutcome::Factored(f) => f.dump(),
            LdltOutcome::Obstruction(o) => {
                let idx: Vec<String> = o.indices.iter().map(|i| (i + 1).to_string()).collect();
                format!(
                    "obstruction at rows: {}\nresidual:\n{}",
                    idx.join(" "),
                    o.residual.dump()
                )
            }
        }
    }
}

fn swap(a: &mut PolyMatrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    let n = a.nrows();
    for c in 0..a.ncols() {
        let t = std::mem::replace(&mut a[(i, c)], NcPoly::zero(0));
        a[(i, c)] = std::mem::replace(&mut a[(j, c)], t);
    }
    for r in 0..n {
        let t = std::mem::replace(&mut a[(r, i)], NcPoly::zero(0));
        a[(r, i)] = std::mem::replace(&mut a[(r, j)], t);
    }
}

fn residual_is_zero(a: &PolyMatrix, k: usize) -> bool {
    (k..a.nrows()).all(|i| (k..a.ncols()).all(|j| a[(i, j)].is_zero()))
}

/// The leading entry when it is a nonzero constant, else the largest absolute
/// constant on the remaining diagonal with ties to the lowest original index.
fn choose_pivot(a: &PolyMatrix, perm: &[usize], k: usize) -> Option<usize> {
    if a[(k, k)].as_constant().is_some_and(|c| !c.is_zero()) {
        return Some(k);
    }
    let mut best: Option<(usize, Rational)> = None;
    for i in k..a.nrows() {
        let Some(c) = a[(i, i)].as_constant() else {
            continue;
        };
        if c.is_zero() {
            continue;
        }
        let better = match &best {
            None => true,
            Some((b, bc)) => {
                let (ca, cb) = (c.abs(), bc.abs());
                ca > cb || (ca == cb && perm[i] < perm[*b])
            }
        };
        if better {
            best = Some((i, c));
        }
    }
    best.map(|(i, _)| i)
}

pub fn ldlt_factor(m: &PolyMatrix) -> Result<LdltOutcome> {
    if !m.is_symmetric() {
        return Err(NcError::NotSymmetric);
    }
    if m.has_directions() {
        return Err(NcError::DirectionLettersPresent);
    }
    let g = m.vars();
    let n = m.nrows();
    let mut a = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut l = PolyMatrix::identity(g, n);
    let mut d = vec![Rational::zero(); n];

    for k in 0..n {
        if residual_is_zero(&a, k) {
            break;
        }
        let Some(p) = choose_pivot(&a, &perm, k) else {
            let idx: Vec<usize> = (k..n).collect();
            return Ok(LdltOutcome::Obstruction(Obstruction {
                residual: a.submatrix(&idx, &idx),
                indices: perm[k..].to_vec(),
                pivots: d[..k].to_vec(),
            }));
        };
        swap(&mut a, k, p);
        perm.swap(k, p);
        if p != k {
            for c in 0..k {
                let t = std::mem::replace(&mut l[(k, c)], NcPoly::zero(g));
                l[(k, c)] = std::mem::replace(&mut l[(p, c)], t);
            }
        }
        let c = a[(k, k)].as_constant().expect("pivot is constant");
        let inv = c.recip();
        for j in k + 1..n {
            l[(j, k)] = a[(j, k)].scale(&inv);
        }
        for j in k + 1..n {
            if a[(j, k)].is_zero() {
                continue;
            }
            for i in k + 1..n {
                if a[(k, i)].is_zero() {
                    continue;
                }
                let upd = l[(j, k)].multiply(&a[(k, i)])?;
                a[(j, i)] = a[(j, i)].checked_sub(&upd)?;
            }
        }
        d[k] = c;
    }
    Ok(LdltOutcome::Factored(LdltFactorization { perm, l, d }))
}

impl LdltFactorization {
    pub fn size(&self) -> usize {
        self.d.len()
    }

    /// `L e_i`.
    pub fn column(&self, i: usize) -> Result<Vec<NcPoly>> {
        if i >= self.size() {
            return Err(NcError::IndexOutOfRange {
                index: i,
                size: self.size(),
            });
        }
        Ok(self.l.column(i))
    }

    pub fn permuted(&self, m: &PolyMatrix) -> PolyMatrix {
        m.submatrix(&self.perm, &self.perm)
    }

    /// `L diag(d) L^*`.
    pub fn reconstruct(&self) -> Result<PolyMatrix> {
        let mut ld = self.l.clone();
        for ((i, j), p) in self.l.entries() {
            ld[(i, j)] = p.scale(&self.d[j]);
        }
        ld.multiply(&self.l.adjoint())
    }

    /// Exact check of `P M P^T = L D L^*`.
    pub fn verify(&self, m: &PolyMatrix) -> Result<bool> {
        if m.nrows() != self.size() || m.ncols() != self.size() {
            return Err(NcError::DimensionMismatch(format!(
                "factorization of size {} against {}x{} matrix",
                self.size(),
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(self.permuted(m) == self.reconstruct()?)
    }

    pub fn is_psd_constant(&self) -> bool {
        self.d.iter().all(|c| !c.is_negative())
    }

    /// Permutation line (1-based), `L` grid, and pivots.
    pub fn dump(&self) -> String {
        let perm: Vec<String> = self.perm.iter().map(|i| (i + 1).to_string()).collect();
        let d: Vec<String> = self.d.iter().map(format_rational).collect();
        format!(
            "perm: {}\nL:\n{}D: {}\n",
            perm.join(" "),
            self.l.dump(),
            d.join(", ")
        )
    }
}
