//! Floating-point evaluation of quadratics and middle matrices on matrix
//! tuples, eigenvalue tests, and sampling policies.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{NcError, Result};
use crate::freealg::{evaluate, MatrixTuple, NcPoly};
use crate::polymatrix::PolyMatrix;

/// Which sizes to sample, how often, and the PSD tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplePolicy {
    pub sizes: Vec<usize>,
    pub samples_per_size: usize,
    pub tol: f64,
    pub seed: u64,
}

impl SamplePolicy {
    pub fn new(sizes: Vec<usize>, samples_per_size: usize, tol: f64, seed: u64) -> Result<Self> {
        let p = SamplePolicy {
            sizes,
            samples_per_size,
            tol,
            seed,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() {
            return Err(NcError::InvalidPolicy("no sizes".into()));
        }
        if self.sizes.contains(&0) {
            return Err(NcError::InvalidPolicy("size 0".into()));
        }
        if !self.tol.is_finite() || self.tol <= 0.0 {
            return Err(NcError::InvalidPolicy(format!(
                "tolerance {} is not positive",
                self.tol
            )));
        }
        Ok(())
    }

    /// Witness-search defaults for a hessian of degree `deg`: sizes
    /// `1..=max(3, ceil(deg/2) + 1)`, 200 samples each, tolerance `1e-8`.
    pub fn witness_search(deg: usize, seed: u64) -> Self {
        let n_max = 3.max(deg.div_ceil(2) + 1);
        SamplePolicy {
            sizes: (1..=n_max).collect(),
            samples_per_size: 200,
            tol: 1e-8,
            seed,
        }
    }

    /// A single generic size `deg + 1`.
    pub fn identity_testing(deg: usize, seed: u64) -> Self {
        SamplePolicy {
            sizes: vec![deg + 1],
            samples_per_size: 1,
            tol: 1e-8,
            seed,
        }
    }

    /// The guaranteed-sufficient size `sum_{j=0}^{deg} (2g)^j`. Grows fast;
    /// saturates instead of overflowing.
    pub fn paranoid(g: usize, deg: usize, seed: u64) -> Self {
        let base = 2 * g;
        let mut n: usize = 0;
        let mut pow: usize = 1;
        for _ in 0..=deg {
            n = n.saturating_add(pow);
            pow = pow.saturating_mul(base);
        }
        SamplePolicy {
            sizes: vec![n],
            samples_per_size: 1,
            tol: 1e-8,
            seed,
        }
    }

    /// Independent stream for size `n`.
    pub fn rng_for(&self, n: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(n as u64);
        rng
    }
}

/// `q(X, X^T)[H, H^T]` for `q` of direction bidegree `(1, 1)`.
pub fn eval_quadratic(q: &NcPoly, x: &MatrixTuple, h: &MatrixTuple) -> Result<DMatrix<f64>> {
    if let Some(bad) = q.terms().keys().find(|m| m.direction_bidegree() != (1, 1)) {
        return Err(NcError::WrongBidegree(bad.clone()));
    }
    evaluate(q, x, Some(h))
}

/// Block matrix whose `(i, j)` block is `M_ij(X, X^T)`.
pub fn eval_middle_matrix(m: &PolyMatrix, x: &MatrixTuple) -> Result<DMatrix<f64>> {
    let n = x.size();
    let mut out = DMatrix::zeros(m.nrows() * n, m.ncols() * n);
    for ((i, j), p) in m.entries() {
        if p.is_zero() {
            continue;
        }
        let block = evaluate(p, x, None)?;
        out.view_mut((i * n, j * n), (n, n)).copy_from(&block);
    }
    Ok(out)
}

/// `(A + A^T) / 2`.
pub fn sym_part(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a + a.transpose()) * 0.5
}

/// Smallest eigenvalue of a symmetric matrix. The asymmetry may not exceed
/// `1e-12` relative to the largest entry (or absolutely below 1).
pub fn min_eigenvalue(a: &DMatrix<f64>) -> Result<f64> {
    if !a.is_square() {
        return Err(NcError::DimensionMismatch(format!(
            "{}x{} is not square",
            a.nrows(),
            a.ncols()
        )));
    }
    if a.nrows() == 0 {
        return Ok(0.0);
    }
    let scale = a.amax().max(1.0);
    if (a - a.transpose()).amax() > 1e-12 * scale {
        return Err(NcError::NotSymmetric);
    }
    let eig = a.clone().symmetric_eigenvalues();
    Ok(eig.iter().copied().fold(f64::INFINITY, f64::min))
}

/// Smallest eigenvalue and a unit eigenvector for it.
pub fn min_eigenpair(a: &DMatrix<f64>) -> Result<(f64, nalgebra::DVector<f64>)> {
    min_eigenvalue(a)?;
    let se = a.clone().symmetric_eigen();
    let (k, lambda) =
        se.eigenvalues
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |acc, (i, v)| if v < acc.1 { (i, v) } else { acc },
            );
    Ok((lambda, se.eigenvectors.column(k).into_owned()))
}

pub fn is_psd(a: &DMatrix<f64>, tol: f64) -> Result<bool> {
    Ok(min_eigenvalue(a)? >= -tol)
}

/// Smallest eigenvalue of the symmetrized evaluation of a quadratic.
pub fn quadratic_min_eigenvalue(q: &NcPoly, x: &MatrixTuple, h: &MatrixTuple) -> Result<f64> {
    min_eigenvalue(&sym_part(&eval_quadratic(q, x, h)?))
}

/// Outcome of [`sample_quadratic`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampleReport {
    pub samples: usize,
    /// Smallest eigenvalue seen at each policy size, in order.
    pub min_by_size: Vec<(usize, f64)>,
    /// First sample below `-tol`, if any.
    pub violation: Option<(MatrixTuple, MatrixTuple, f64)>,
}

impl SampleReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Evaluate `q` on random `(X, H)` at every policy size.
pub fn sample_quadratic(q: &NcPoly, policy: &SamplePolicy) -> Result<SampleReport> {
    policy.validate()?;
    let g = q.vars();
    let mut report = SampleReport {
        samples: 0,
        min_by_size: Vec::new(),
        violation: None,
    };
    for &n in &policy.sizes {
        let mut rng = policy.rng_for(n);
        let mut worst = f64::INFINITY;
        for _ in 0..policy.samples_per_size {
            let x = MatrixTuple::random(g, n, &mut rng);
            let h = MatrixTuple::random(g, n, &mut rng);
            let lam = quadratic_min_eigenvalue(q, &x, &h)?;
            report.samples += 1;
            worst = worst.min(lam);
            if lam < -policy.tol && report.violation.is_none() {
                report.violation = Some((x, h, lam));
            }
        }
        report.min_by_size.push((n, worst));
    }
    Ok(report)
}
