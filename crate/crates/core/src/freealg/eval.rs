use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::monomial::{Letter, LetterClass};
use super::poly::{rat_to_f64, NcPoly};
use crate::error::{NcError, Result};

/// A `g`-tuple of real `n x n` matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Vec<f64>>>", into = "Vec<Vec<Vec<f64>>>")]
pub struct MatrixTuple {
    n: usize,
    mats: Vec<DMatrix<f64>>,
}

impl MatrixTuple {
    pub fn new(mats: Vec<DMatrix<f64>>) -> Result<Self> {
        let n = mats
            .first()
            .map(|m| m.nrows())
            .ok_or(NcError::TupleLength {
                expected: 1,
                found: 0,
            })?;
        for m in &mats {
            if m.nrows() != n || m.ncols() != n {
                return Err(NcError::SizeMismatch {
                    expected: n,
                    found: if m.nrows() != n { m.nrows() } else { m.ncols() },
                });
            }
        }
        Ok(MatrixTuple { n, mats })
    }

    pub fn zeros(g: usize, n: usize) -> Self {
        MatrixTuple {
            n,
            mats: vec![DMatrix::zeros(n, n); g],
        }
    }

    /// Entries i.i.d. uniform on `[-1, 1]`.
    pub fn random<R: Rng + ?Sized>(g: usize, n: usize, rng: &mut R) -> Self {
        let mats = (0..g)
            .map(|_| DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..=1.0)))
            .collect();
        MatrixTuple { n, mats }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn get(&self, i: usize) -> &DMatrix<f64> {
        &self.mats[i]
    }

    pub fn matrices(&self) -> &[DMatrix<f64>] {
        &self.mats
    }

    pub fn map(&self, f: impl Fn(&DMatrix<f64>) -> DMatrix<f64>) -> MatrixTuple {
        MatrixTuple {
            n: self.n,
            mats: self.mats.iter().map(f).collect(),
        }
    }

    /// Componentwise `self + t * other`.
    pub fn axpy(&self, t: f64, other: &MatrixTuple) -> MatrixTuple {
        MatrixTuple {
            n: self.n,
            mats: self
                .mats
                .iter()
                .zip(&other.mats)
                .map(|(a, b)| a + b * t)
                .collect(),
        }
    }
}

impl TryFrom<Vec<Vec<Vec<f64>>>> for MatrixTuple {
    type Error = NcError;
    fn try_from(v: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        let mats = v
            .into_iter()
            .map(|rows| {
                let n = rows.len();
                if rows.iter().any(|r| r.len() != n) {
                    return Err(NcError::SizeMismatch {
                        expected: n,
                        found: rows.iter().map(Vec::len).find(|&l| l != n).unwrap_or(0),
                    });
                }
                Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
            })
            .collect::<Result<Vec<_>>>()?;
        MatrixTuple::new(mats)
    }
}

impl From<MatrixTuple> for Vec<Vec<Vec<f64>>> {
    fn from(t: MatrixTuple) -> Self {
        t.mats
            .iter()
            .map(|m| {
                (0..m.nrows())
                    .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
                    .collect()
            })
            .collect()
    }
}

/// Block-diagonal direct sum, componentwise over the tuple.
pub fn direct_sum(tuples: &[MatrixTuple]) -> Result<MatrixTuple> {
    let first = tuples.first().ok_or(NcError::EmptyDirectSum)?;
    let g = first.len();
    if let Some(bad) = tuples.iter().find(|t| t.len() != g) {
        return Err(NcError::TupleLength {
            expected: g,
            found: bad.len(),
        });
    }
    let n: usize = tuples.iter().map(MatrixTuple::size).sum();
    let mats = (0..g)
        .map(|k| {
            let mut m = DMatrix::zeros(n, n);
            let mut off = 0;
            for t in tuples {
                m.view_mut((off, off), (t.n, t.n)).copy_from(&t.mats[k]);
                off += t.n;
            }
            m
        })
        .collect();
    Ok(MatrixTuple { n, mats })
}

/// Evaluate with an arbitrary assignment of a matrix to every letter.
pub fn evaluate_with<'a>(
    p: &NcPoly,
    n: usize,
    assign: impl Fn(Letter) -> &'a DMatrix<f64>,
) -> DMatrix<f64> {
    let mut acc = DMatrix::zeros(n, n);
    for (m, c) in p.iter() {
        let c = rat_to_f64(c);
        let mut letters = m.letters().iter();
        match letters.next() {
            None => {
                for i in 0..n {
                    acc[(i, i)] += c;
                }
            }
            Some(&first) => {
                let mut prod = assign(first).clone();
                for &l in letters {
                    prod = &prod * assign(l);
                }
                acc += prod * c;
            }
        }
    }
    acc
}

/// Substitute `x_j -> X_j`, `x_j' -> X_j^T`, and likewise `h` from `H`.
pub fn evaluate(p: &NcPoly, x: &MatrixTuple, h: Option<&MatrixTuple>) -> Result<DMatrix<f64>> {
    let g = p.vars();
    if x.len() != g {
        return Err(NcError::TupleLength {
            expected: g,
            found: x.len(),
        });
    }
    let n = x.size();
    if p.has_directions() && h.is_none() {
        return Err(NcError::MissingDirection);
    }
    if let Some(h) = h {
        if h.len() != g {
            return Err(NcError::TupleLength {
                expected: g,
                found: h.len(),
            });
        }
        if h.size() != n {
            return Err(NcError::SizeMismatch {
                expected: n,
                found: h.size(),
            });
        }
    }
    let xt: Vec<DMatrix<f64>> = x.mats.iter().map(|m| m.transpose()).collect();
    let ht: Vec<DMatrix<f64>> = h
        .map(|h| h.mats.iter().map(|m| m.transpose()).collect())
        .unwrap_or_default();
    let hm = h.map(|h| &h.mats[..]).unwrap_or(&[]);
    Ok(evaluate_with(p, n, |l| {
        let i = l.index as usize - 1;
        match (l.class, l.transposed) {
            (LetterClass::X, false) => &x.mats[i],
            (LetterClass::X, true) => &xt[i],
            (LetterClass::H, false) => &hm[i],
            (LetterClass::H, true) => &ht[i],
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sorted_eigs(m: &DMatrix<f64>) -> Vec<f64> {
        let s = (m + m.transpose()) * 0.5;
        let mut e: Vec<f64> = s.symmetric_eigenvalues().iter().copied().collect();
        e.sort_by(f64::total_cmp);
        e
    }

    #[test]
    fn hand_multiplication() {
        let p = NcPoly::parse("x1'*x1", 1).unwrap();
        let x = MatrixTuple::new(vec![dmatrix![0.0, 1.0; 0.0, 0.0]]).unwrap();
        assert_eq!(
            evaluate(&p, &x, None).unwrap(),
            dmatrix![0.0, 0.0; 0.0, 1.0]
        );
    }

    #[test]
    fn constants_and_letters() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = MatrixTuple::random(2, 3, &mut rng);
        let c = NcPoly::parse("7/2", 2).unwrap();
        assert_eq!(
            evaluate(&c, &x, None).unwrap(),
            DMatrix::identity(3, 3) * 3.5
        );
        let p = NcPoly::parse("x1", 2).unwrap();
        assert_eq!(&evaluate(&p, &x, None).unwrap(), x.get(0));
        assert_eq!(
            evaluate(&NcPoly::one(2), &x, None).unwrap(),
            DMatrix::identity(3, 3)
        );
    }

    #[test]
    fn transpose_compatibility() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = MatrixTuple::random(2, 3, &mut rng);
        let p = NcPoly::parse("x1*x2' + 3*x2*x2*x1' - 1", 2).unwrap();
        let a = evaluate(&p.involution(), &x, None).unwrap();
        let b = evaluate(&p, &x, None).unwrap().transpose();
        assert!((a - b).abs().max() < 1e-12);
    }

    #[test]
    fn errors() {
        let x = MatrixTuple::zeros(1, 2);
        let p = NcPoly::parse("h1'*h1", 1).unwrap();
        assert_eq!(
            evaluate(&p, &x, None).unwrap_err(),
            NcError::MissingDirection
        );
        let h = MatrixTuple::zeros(1, 3);
        assert!(matches!(
            evaluate(&p, &x, Some(&h)),
            Err(NcError::SizeMismatch { .. })
        ));
        assert_eq!(direct_sum(&[]).unwrap_err(), NcError::EmptyDirectSum);
        assert!(MatrixTuple::new(vec![DMatrix::zeros(2, 2), DMatrix::zeros(3, 3)]).is_err());
    }

    #[test]
    fn direct_sum_layout() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = MatrixTuple::random(2, 1, &mut rng);
        let b = MatrixTuple::random(2, 2, &mut rng);
        let c = MatrixTuple::random(2, 1, &mut rng);
        let s = direct_sum(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(s.size(), 3);
        let t = direct_sum(&[a.clone(), b.clone(), c.clone()]).unwrap();
        for k in 0..2 {
            let m = t.get(k);
            assert_eq!(m[(0, 0)], a.get(k)[(0, 0)]);
            assert_eq!(m.view((1, 1), (2, 2)), b.get(k).view((0, 0), (2, 2)));
            assert_eq!(m[(3, 3)], c.get(k)[(0, 0)]);
            assert_eq!(m[(0, 1)], 0.0);
            assert_eq!(m[(3, 1)], 0.0);
        }
    }

    #[test]
    fn doubled_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = MatrixTuple::random(2, 3, &mut rng);
        let p = NcPoly::parse("x1'*x1 + x2*x2' + x1*x2 + x2'*x1'", 2).unwrap();
        let single = sorted_eigs(&evaluate(&p, &x, None).unwrap());
        let doubled =
            sorted_eigs(&evaluate(&p, &direct_sum(&[x.clone(), x]).unwrap(), None).unwrap());
        let mut expect: Vec<f64> = single.iter().chain(single.iter()).copied().collect();
        expect.sort_by(f64::total_cmp);
        for (a, b) in expect.iter().zip(&doubled) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}
