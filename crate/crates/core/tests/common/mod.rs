#![allow(dead_code)]

use nalgebra::DMatrix;
use ncplush::{Letter, MatrixTuple, Monomial, NcPoly, Rational};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A polynomial assembled from known pieces, so the plush decomposition is
/// known in advance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub g: usize,
    pub weights_f: Vec<Rational>,
    pub fs: Vec<NcPoly>,
    pub weights_k: Vec<Rational>,
    pub ks: Vec<NcPoly>,
    pub big_f: NcPoly,
    pub p: NcPoly,
}

pub fn rational(rng: &mut impl Rng, max_num: i64, max_den: i64) -> Rational {
    loop {
        let n = rng.random_range(-max_num..=max_num);
        if n != 0 {
            let d = rng.random_range(1..=max_den);
            return Rational::new(BigInt::from(n), BigInt::from(d));
        }
    }
}

pub fn positive_rational(rng: &mut impl Rng) -> Rational {
    let n: i64 = rng.random_range(1..=4);
    let d: i64 = rng.random_range(1..=3);
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn analytic_word(rng: &mut impl Rng, g: usize, len: usize) -> Monomial {
    Monomial::new(
        (0..len)
            .map(|_| Letter::x(rng.random_range(1..=g as u32)))
            .collect(),
    )
}

/// Analytic polynomial of exact degree `deg` with at most `terms` terms.
pub fn analytic_poly(
    rng: &mut impl Rng,
    g: usize,
    deg: usize,
    terms: usize,
    allow_const: bool,
) -> NcPoly {
    let mut p = NcPoly::zero(g);
    p.add_term(analytic_word(rng, g, deg), rational(rng, 3, 2));
    for _ in 1..terms {
        let lo = if allow_const { 0 } else { 1 };
        let len = rng.random_range(lo..=deg);
        p.add_term(analytic_word(rng, g, len), rational(rng, 3, 2));
    }
    if p.is_zero() || p.degree() == 0 {
        p.add_term(
            analytic_word(rng, g, deg.max(1)),
            Rational::from_integer(1.into()),
        );
    }
    p
}

/// Random `sum d f^* f + sum e k k^* + F + F^*` with `g` in `{1,2,3}`,
/// `deg f, deg k <= 3`, and one to three square summands.
pub fn random_instance(rng: &mut impl Rng) -> Instance {
    let g = rng.random_range(1..=3usize);
    let summands = rng.random_range(1..=3usize);
    let nf = rng.random_range(0..=summands);
    let nk = summands - nf;
    let make = |rng: &mut ChaCha8Rng| {
        let deg = rng.random_range(1..=3usize);
        let terms = rng.random_range(1..=3usize);
        let allow_const = rng.random_bool(0.3);
        (
            positive_rational(rng),
            analytic_poly(rng, g, deg, terms, allow_const),
        )
    };
    let mut local = ChaCha8Rng::seed_from_u64(rng.random());
    let (weights_f, fs): (Vec<_>, Vec<_>) = (0..nf).map(|_| make(&mut local)).unzip();
    let (weights_k, ks): (Vec<_>, Vec<_>) = (0..nk).map(|_| make(&mut local)).unzip();
    let big_f = if local.random_bool(0.7) {
        let deg = local.random_range(1..=3usize);
        analytic_poly(&mut local, g, deg, 2, true)
    } else {
        NcPoly::zero(g)
    };
    let p = expand(&weights_f, &fs, &weights_k, &ks, &big_f);
    Instance {
        g,
        weights_f,
        fs,
        weights_k,
        ks,
        big_f,
        p,
    }
}

/// Multiply out the pieces with the operator forms.
pub fn expand(
    wf: &[Rational],
    fs: &[NcPoly],
    wk: &[Rational],
    ks: &[NcPoly],
    big_f: &NcPoly,
) -> NcPoly {
    let mut p = big_f + &big_f.involution();
    for (d, f) in wf.iter().zip(fs) {
        p = &p + &(&f.involution() * f).scale(d);
    }
    for (e, k) in wk.iter().zip(ks) {
        p = &p + &(k * &k.involution()).scale(e);
    }
    p
}

/// The fixed corpus used by the acceptance and integration suites.
pub fn corpus(count: usize, seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_instance(&mut rng)).collect()
}

/// Evaluate `p` with `x_j -> A_j` and `x_j' -> B_j` taken independently.
pub fn eval_split(p: &NcPoly, a: &[DMatrix<f64>], b: &[DMatrix<f64>]) -> DMatrix<f64> {
    let n = a[0].nrows();
    let mut acc = DMatrix::zeros(n, n);
    for (m, c) in p.iter() {
        let c = ncplush::freealg::rat_to_f64(c);
        let mut prod = DMatrix::identity(n, n);
        for l in m.letters() {
            let i = l.index as usize - 1;
            prod = if l.transposed {
                prod * &b[i]
            } else {
                prod * &a[i]
            };
        }
        acc += prod * c;
    }
    acc
}

/// Mixed second difference of `p(X + tH, X^T + sH^T)` at zero, with two
/// Richardson steps.
pub fn finite_difference_hessian(
    p: &NcPoly,
    x: &MatrixTuple,
    h: &MatrixTuple,
    step: f64,
) -> DMatrix<f64> {
    let d = |e: f64| {
        let at = |t: f64, s: f64| {
            let a: Vec<_> = x
                .matrices()
                .iter()
                .zip(h.matrices())
                .map(|(x, h)| x + h * t)
                .collect();
            let b: Vec<_> = x
                .matrices()
                .iter()
                .zip(h.matrices())
                .map(|(x, h)| x.transpose() + h.transpose() * s)
                .collect();
            eval_split(p, &a, &b)
        };
        (at(e, e) - at(e, -e) - at(-e, e) + at(-e, -e)) / (4.0 * e * e)
    };
    let (d1, d2, d3) = (d(step), d(step / 2.0), d(step / 4.0));
    let r1 = (&d2 * 4.0 - &d1) / 3.0;
    let r2 = (&d3 * 4.0 - &d2) / 3.0;
    (r2 * 16.0 - r1) / 15.0
}
