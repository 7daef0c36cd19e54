//! Plush decision: certify `p = sum d_i f_i^* f_i + sum e_j k_j k_j^* + F + F^*`
//! from an exact factorization of the middle matrix of its complex hessian, or
//! refute it with matrices `(X, H)` where the hessian has a negative
//! eigenvalue.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::calculus::complex_hessian;
use crate::error::{NcError, Result};
use crate::freealg::{
    format_rational, rat, rational_serde, Letter, MatrixTuple, Monomial, NcPoly, Rational,
};
use crate::ldlt::{ldlt_factor, LdltFactorization, LdltOutcome};
use crate::mmr::{block_view, build_mmr, BorderVector, Mmr};
use crate::numeval::{
    eval_quadratic, min_eigenpair, quadratic_min_eigenvalue, sym_part, SamplePolicy,
};
use crate::polymatrix::PolyMatrix;
use crate::wed::{antiderivative, is_directional_derivative};

/// Middle-matrix blocks that must vanish for a plush hessian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MixedBlockName {
    Q2,
    Q4,
    Q6,
    Q8,
    Cross,
}

/// A failed necessary condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    OddDegree {
        degree: usize,
    },
    MixedBlock {
        block: MixedBlockName,
        row: Monomial,
        col: Monomial,
    },
    /// A `Q1` entry that is not hereditary, or a `Q5` entry that is not
    /// antihereditary.
    HereditaryViolation {
        row: Monomial,
        col: Monomial,
        monomial: Monomial,
    },
    DegreeBound {
        border: Monomial,
        bound: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OddDegree { degree } => write!(f, "hessian has odd degree {degree}"),
            Violation::MixedBlock { block, row, col } => {
                write!(f, "block {block:?} nonzero at ({row}, {col})")
            }
            Violation::HereditaryViolation { row, col, monomial } => {
                write!(
                    f,
                    "entry ({row}, {col}) contains {monomial} of the wrong shape"
                )
            }
            Violation::DegreeBound { border, bound } => {
                write!(f, "border monomial {border} exceeds degree {bound}")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessPath {
    MixedBlock,
    HereditaryViolation,
    OddDegree,
    DegreeBound,
    Obstruction,
    NegativePivot,
    NumericSample,
}

impl WitnessPath {
    fn of(v: &Violation) -> Self {
        match v {
            Violation::OddDegree { .. } => WitnessPath::OddDegree,
            Violation::MixedBlock { .. } => WitnessPath::MixedBlock,
            Violation::HereditaryViolation { .. } => WitnessPath::HereditaryViolation,
            Violation::DegreeBound { .. } => WitnessPath::DegreeBound,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            WitnessPath::MixedBlock => "mixed-block",
            WitnessPath::HereditaryViolation => "hereditary-violation",
            WitnessPath::OddDegree => "odd-degree",
            WitnessPath::DegreeBound => "degree-bound",
            WitnessPath::Obstruction => "obstruction",
            WitnessPath::NegativePivot => "negative-pivot",
            WitnessPath::NumericSample => "numeric-sample",
        }
    }
}

/// Matrices at which the hessian is not positive semidefinite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub x: MatrixTuple,
    pub h: MatrixTuple,
    /// Smallest eigenvalue of the symmetrized `q(X, X^T)[H, H^T]`.
    pub eigenvalue: f64,
    pub path: WitnessPath,
    pub violation: Option<Violation>,
}

impl Counterexample {
    /// Re-evaluate the hessian at the stored matrices.
    pub fn replay(&self, q: &NcPoly) -> Result<f64> {
        quadratic_min_eigenvalue(q, &self.x, &self.h)
    }
}

/// `p = sum d_i f_i^* f_i + sum e_j k_j k_j^* + F + F^*` with positive rational
/// weights and analytic `f_i, k_j, F`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    #[serde(with = "rational_serde::vec")]
    pub weights_f: Vec<Rational>,
    pub fs: Vec<NcPoly>,
    #[serde(with = "rational_serde::vec")]
    pub weights_k: Vec<Rational>,
    pub ks: Vec<NcPoly>,
    #[serde(rename = "F")]
    pub big_f: NcPoly,
}

impl Decomposition {
    /// The right-hand side, multiplied out.
    pub fn expand(&self) -> Result<NcPoly> {
        let mut out = self.big_f.checked_add(&self.big_f.involution())?;
        for (d, f) in self.weights_f.iter().zip(&self.fs) {
            out = out.checked_add(&f.involution().multiply(f)?.scale(d))?;
        }
        for (e, k) in self.weights_k.iter().zip(&self.ks) {
            out = out.checked_add(&k.multiply(&k.involution())?.scale(e))?;
        }
        Ok(out)
    }

    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (i, (d, f)) in self.weights_f.iter().zip(&self.fs).enumerate() {
            s.push_str(&format!(
                "d{} = {}\nf{} = {}\n",
                i + 1,
                format_rational(d),
                i + 1,
                f
            ));
        }
        for (i, (e, k)) in self.weights_k.iter().zip(&self.ks).enumerate() {
            s.push_str(&format!(
                "e{} = {}\nk{} = {}\n",
                i + 1,
                format_rational(e),
                i + 1,
                k
            ));
        }
        s.push_str(&format!("F = {}\n", self.big_f));
        s
    }
}

/// Exact check of a decomposition against `p`: positive weights, analytic
/// pieces, equal re-expansion, and equal complex hessians.
pub fn verify_decomposition(p: &NcPoly, d: &Decomposition) -> bool {
    let shapes_ok = d.weights_f.len() == d.fs.len()
        && d.weights_k.len() == d.ks.len()
        && d.weights_f
            .iter()
            .chain(&d.weights_k)
            .all(Signed::is_positive)
        && d.fs
            .iter()
            .chain(&d.ks)
            .chain([&d.big_f])
            .all(NcPoly::is_analytic)
        && d.fs
            .iter()
            .chain(&d.ks)
            .chain([&d.big_f])
            .all(|f| f.vars() == p.vars());
    if !shapes_ok {
        return false;
    }
    let Ok(e) = d.expand() else {
        return false;
    };
    if e != *p {
        return false;
    }
    matches!((complex_hessian(&e), complex_hessian(p)), (Ok(a), Ok(b)) if a == b)
}

/// Middle-matrix data backing a plush verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub border: BorderVector,
    pub middle: PolyMatrix,
    pub q1: LdltFactorization,
    pub q5: LdltFactorization,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[allow(clippy::large_enum_variant)]
pub enum PlushVerdict {
    Plush {
        decomposition: Decomposition,
        certificate: Certificate,
    },
    NotPlush(Counterexample),
    /// A necessary condition failed or no constant pivot existed, but the
    /// sampling budget found no witness.
    Inconclusive {
        path: WitnessPath,
        reason: String,
    },
}

impl PlushVerdict {
    pub fn is_plush(&self) -> bool {
        matches!(self, PlushVerdict::Plush { .. })
    }

    pub fn is_not_plush(&self) -> bool {
        matches!(self, PlushVerdict::NotPlush(_))
    }

    pub fn tag(&self) -> &'static str {
        match self {
            PlushVerdict::Plush { .. } => "plush",
            PlushVerdict::NotPlush(_) => "not plush",
            PlushVerdict::Inconclusive { .. } => "inconclusive",
        }
    }

    /// Human-readable report; floats carry 17 significant digits.
    pub fn report(&self) -> String {
        let mut s = format!("verdict: {}\n", self.tag());
        match self {
            PlushVerdict::Plush {
                decomposition,
                certificate,
            } => {
                s.push_str(&decomposition.dump());
                s.push_str("border:\n");
                s.push_str(&certificate.border.dump());
                s.push_str("ldlt Q1:\n");
                s.push_str(&certificate.q1.dump());
                s.push_str("ldlt Q5:\n");
                s.push_str(&certificate.q5.dump());
            }
            PlushVerdict::NotPlush(c) => {
                s.push_str(&format!("path: {}\n", c.path.tag()));
                if let Some(v) = &c.violation {
                    s.push_str(&format!("violation: {v}\n"));
                }
                s.push_str(&format!("size: {}\n", c.x.size()));
                s.push_str(&format!("eigenvalue: {}\n", fmt_f64(c.eigenvalue)));
                for (name, t) in [("X", &c.x), ("H", &c.h)] {
                    for (i, m) in t.matrices().iter().enumerate() {
                        s.push_str(&format!("{name}{}:\n", i + 1));
                        s.push_str(&dump_matrix(m));
                    }
                }
            }
            PlushVerdict::Inconclusive { path, reason } => {
                s.push_str(&format!("path: {}\nreason: {reason}\n", path.tag()));
            }
        }
        s
    }
}

/// Scientific notation with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Row-major, one bracketed row per line.
pub fn dump_matrix(m: &DMatrix<f64>) -> String {
    let mut s = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| fmt_f64(m[(i, j)])).collect();
        s.push_str(&format!("[{}]\n", row.join(", ")));
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Screen {
    Pass,
    Violation(Violation),
}

fn first_nonzero(
    m: &PolyMatrix,
    rows: &[usize],
    cols: &[usize],
    v: &BorderVector,
) -> Option<(Monomial, Monomial)> {
    for &i in rows {
        for &j in cols {
            if !m[(i, j)].is_zero() {
                return Some((v.entries()[i].clone(), v.entries()[j].clone()));
            }
        }
    }
    None
}

/// Necessary conditions on the hessian `q` and its middle matrix: even
/// degree, vanishing mixed blocks, hereditary `Q1`, antihereditary `Q5`, and
/// border degrees at most half the degree.
pub fn structural_screen(q: &NcPoly, v: &BorderVector, m: &PolyMatrix) -> Result<Screen> {
    let degree = q.degree();
    if degree % 2 == 1 {
        return Ok(Screen::Violation(Violation::OddDegree { degree }));
    }
    let b = block_view(m, v)?;
    let h_side: Vec<usize> = b.a.iter().chain(&b.b).copied().collect();
    let ht_side: Vec<usize> = b.at.iter().chain(&b.bt).copied().collect();
    let checks = [
        (MixedBlockName::Q2, &b.a, &b.b),
        (MixedBlockName::Q4, &b.b, &b.b),
        (MixedBlockName::Q6, &b.at, &b.bt),
        (MixedBlockName::Q8, &b.bt, &b.bt),
        (MixedBlockName::Cross, &h_side, &ht_side),
    ];
    for (block, rows, cols) in checks {
        if let Some((row, col)) = first_nonzero(m, rows, cols, v) {
            return Ok(Screen::Violation(Violation::MixedBlock { block, row, col }));
        }
    }
    type ShapeTest = fn(&Monomial) -> bool;
    let shape_checks: [(&Vec<usize>, ShapeTest); 2] = [
        (&b.a, Monomial::is_hereditary),
        (&b.at, Monomial::is_antihereditary),
    ];
    for (idx, ok) in shape_checks {
        for &i in idx {
            for &j in idx {
                if let Some(bad) = m[(i, j)].terms().keys().find(|w| !ok(w)) {
                    return Ok(Screen::Violation(Violation::HereditaryViolation {
                        row: v.entries()[i].clone(),
                        col: v.entries()[j].clone(),
                        monomial: bad.clone(),
                    }));
                }
            }
        }
    }
    let bound = degree / 2;
    if let Some(border) = v.entries().iter().find(|e| e.degree() > bound) {
        return Ok(Screen::Violation(Violation::DegreeBound {
            border: border.clone(),
            bound,
        }));
    }
    Ok(Screen::Pass)
}

/// Product of the matrices assigned to a direction-free word.
fn word_matrix(letters: &[Letter], x: &MatrixTuple) -> DMatrix<f64> {
    let n = x.size();
    let mut acc = DMatrix::identity(n, n);
    for l in letters {
        let m = x.get(l.index as usize - 1);
        acc = if l.transposed {
            acc * m.transpose()
        } else {
            acc * m
        };
    }
    acc
}

/// The symmetric matrix `G` on `vec(H_1), .., vec(H_g)` (column-major) with
/// `vec(H)^T G vec(H) = v^T q(X, X^T)[H, H^T] v` for every `H`.
pub fn direction_gram(q: &NcPoly, x: &MatrixTuple, v: &DVector<f64>) -> Result<DMatrix<f64>> {
    let n = x.size();
    let g = q.vars();
    let nn = n * n;
    let mut gram = DMatrix::zeros(g * nn, g * nn);
    for (w, c) in q.iter() {
        if w.direction_bidegree() != (1, 1) {
            return Err(NcError::WrongBidegree(w.clone()));
        }
        let letters = w.letters();
        let pos: Vec<usize> = (0..letters.len())
            .filter(|&i| letters[i].is_direction())
            .collect();
        let (a, b) = (pos[0], pos[1]);
        let pre = word_matrix(&letters[..a], x);
        let mid = word_matrix(&letters[a + 1..b], x);
        let post = word_matrix(&letters[b + 1..], x);
        let left = pre.transpose() * v;
        let right = post * v;
        let outer = &left * right.transpose();
        let c = crate::freealg::rat_to_f64(c);
        let (first, second) = (letters[a], letters[b]);
        // h' ... h: block (j, k) gains (left right^T) (x) mid
        // h ... h': block (k, j) gains mid (x) (left right^T)
        let (row_var, col_var, block) = if first.transposed {
            (first.index, second.index, outer.kronecker(&mid))
        } else {
            (first.index, second.index, mid.kronecker(&outer))
        };
        let r0 = (row_var as usize - 1) * nn;
        let c0 = (col_var as usize - 1) * nn;
        let mut view = gram.view_mut((r0, c0), (nn, nn));
        view += block * c;
    }
    Ok(sym_part(&gram))
}

fn tuple_from_vec(v: &DVector<f64>, g: usize, n: usize) -> MatrixTuple {
    let scale = v.amax().max(f64::MIN_POSITIVE);
    let mats = (0..g)
        .map(|j| {
            DMatrix::from_column_slice(n, n, &v.as_slice()[j * n * n..(j + 1) * n * n]) / scale
        })
        .collect();
    MatrixTuple::new(mats).expect("square blocks of equal size")
}

/// Alternate between the worst vector for fixed `H` and the worst `H` for
/// fixed vector a few times, starting from `h`.
fn refine_direction(
    q: &NcPoly,
    x: &MatrixTuple,
    h: &MatrixTuple,
    rounds: usize,
) -> Result<(MatrixTuple, f64)> {
    let g = q.vars();
    let n = x.size();
    let mut best_h = h.clone();
    let mut best = quadratic_min_eigenvalue(q, x, h)?;
    let mut cur = h.clone();
    for _ in 0..rounds {
        let (_, v) = min_eigenpair(&sym_part(&eval_quadratic(q, x, &cur)?))?;
        let (mu, dir) = min_eigenpair(&direction_gram(q, x, &v)?)?;
        if mu >= 0.0 {
            break;
        }
        cur = tuple_from_vec(&dir, g, n);
        let lam = quadratic_min_eigenvalue(q, x, &cur)?;
        if lam < best {
            best = lam;
            best_h = cur.clone();
        }
    }
    Ok((best_h, best))
}

#[derive(Debug, Clone, PartialEq)]
pub enum WitnessSearch {
    Found(Counterexample),
    NotFound { samples: usize },
}

/// Search sizes in policy order for `(X, H)` with the symmetrized hessian
/// below `-tol`.
///
/// Each sample draws `X` and `H` uniformly from `[-1, 1]`; if `H` alone does
/// not expose a negative eigenvalue it is replaced by the lowest eigenvector
/// of the quadratic form `H -> v^T q(X)[H] v`, `v` being the current worst
/// vector. Every candidate is re-evaluated before being reported.
pub fn find_witness(
    q: &NcPoly,
    hint: Option<&Violation>,
    policy: &SamplePolicy,
) -> Result<WitnessSearch> {
    policy.validate()?;
    let g = q.vars();
    let path = hint.map_or(WitnessPath::NumericSample, WitnessPath::of);
    let mut samples = 0;
    for &n in &policy.sizes {
        let mut rng = policy.rng_for(n);
        for _ in 0..policy.samples_per_size {
            samples += 1;
            let x = MatrixTuple::random(g, n, &mut rng);
            let h = MatrixTuple::random(g, n, &mut rng);
            let (h, lam) = refine_direction(q, &x, &h, 3)?;
            if lam <= -policy.tol {
                return Ok(WitnessSearch::Found(Counterexample {
                    x,
                    h,
                    eigenvalue: lam,
                    path,
                    violation: hint.cloned(),
                }));
            }
        }
    }
    Ok(WitnessSearch::NotFound { samples })
}

fn refute(
    q: &NcPoly,
    violation: Option<Violation>,
    path: WitnessPath,
    reason: String,
    policy: &SamplePolicy,
) -> Result<PlushVerdict> {
    match find_witness(q, violation.as_ref(), policy)? {
        WitnessSearch::Found(mut c) => {
            c.path = path;
            Ok(PlushVerdict::NotPlush(c))
        }
        WitnessSearch::NotFound { samples } => Ok(PlushVerdict::Inconclusive {
            path,
            reason: format!("{reason}; no witness in {samples} samples"),
        }),
    }
}

/// Split a residual with vanishing hessian as `F + F^*`.
fn split_pluriharmonic(r: &NcPoly) -> Result<NcPoly> {
    let c = r.constant_term();
    let mut f = r.filter(|m| !m.is_one() && m.is_analytic());
    f.add_term(Monomial::one(), c * rat(1, 2));
    let back = f.checked_add(&f.involution())?;
    if back != *r {
        return Err(NcError::InternalInconsistency(format!(
            "residual {r} is not of the form F + F^T"
        )));
    }
    Ok(f)
}

/// `sum_k (L_k)^* W_k` for one column of `L` against the permuted border.
fn contract(col: &[NcPoly], border: &[Monomial], g: usize) -> Result<NcPoly> {
    let mut out = NcPoly::zero(g);
    for (c, w) in col.iter().zip(border) {
        if c.is_zero() {
            continue;
        }
        out = out.checked_add(&c.involution().multiply(&NcPoly::monomial(g, w.clone()))?)?;
    }
    Ok(out)
}

/// Antiderivatives of the contracted columns with positive pivots.
fn extract(
    fact: &LdltFactorization,
    border: &BorderVector,
    g: usize,
) -> Result<(Vec<Rational>, Vec<NcPoly>)> {
    let permuted: Vec<Monomial> = fact
        .perm
        .iter()
        .map(|&i| border.entries()[i].clone())
        .collect();
    let mut weights = Vec::new();
    let mut polys = Vec::new();
    for (i, d) in fact.d.iter().enumerate() {
        if d.is_zero() {
            continue;
        }
        let dir = contract(&fact.column(i)?, &permuted, g)?;
        let ok = is_directional_derivative(&dir)
            .map(|r| r.holds())
            .unwrap_or(false);
        if !ok {
            return Err(NcError::InternalInconsistency(format!(
                "pivot column {} contracts to {dir}, not a directional derivative",
                i + 1
            )));
        }
        weights.push(d.clone());
        polys.push(antiderivative(&dir)?);
    }
    Ok((weights, polys))
}

/// [`decide_plush_with`] under the default witness-search policy, seed 0.
pub fn decide_plush(p: &NcPoly) -> Result<PlushVerdict> {
    let policy = SamplePolicy::witness_search(p.degree(), 0);
    decide_plush_with(p, &policy)
}

pub fn decide_plush_with(p: &NcPoly, policy: &SamplePolicy) -> Result<PlushVerdict> {
    if !p.is_symmetric() {
        return Err(NcError::NotSymmetric);
    }
    if p.has_directions() {
        return Err(NcError::AlreadyDirectional);
    }
    let g = p.vars();
    let q = complex_hessian(p)?;
    let Mmr { border, middle } = build_mmr(&q)?;

    if let Screen::Violation(v) = structural_screen(&q, &border, &middle)? {
        let reason = v.to_string();
        return refute(&q, Some(v.clone()), WitnessPath::of(&v), reason, policy);
    }

    let blocks = block_view(&middle, &border)?;
    let mut sides = Vec::new();
    for (block, idx) in [(&blocks.q1, &blocks.a), (&blocks.q5, &blocks.at)] {
        let fact = match ldlt_factor(block)? {
            LdltOutcome::Factored(f) => f,
            LdltOutcome::Obstruction(o) => {
                let reason = format!(
                    "no constant pivot for a {}x{} residual",
                    o.residual.nrows(),
                    o.residual.ncols()
                );
                return refute(&q, None, WitnessPath::Obstruction, reason, policy);
            }
        };
        if let Some(d) = fact.d.iter().find(|d| d.is_negative()) {
            let reason = format!("negative pivot {}", format_rational(d));
            return refute(&q, None, WitnessPath::NegativePivot, reason, policy);
        }
        sides.push((fact, border.select(idx)));
    }
    let (q5, at_border) = sides.pop().expect("two sides");
    let (q1, a_border) = sides.pop().expect("two sides");

    let (weights_f, fs) = extract(&q1, &a_border, g)?;
    let (weights_k, kstars) = extract(&q5, &at_border, g)?;
    let ks: Vec<NcPoly> = kstars.iter().map(NcPoly::involution).collect();

    let mut r = p.clone();
    for (d, f) in weights_f.iter().zip(&fs) {
        r = r.checked_sub(&f.involution().multiply(f)?.scale(d))?;
    }
    for (e, k) in weights_k.iter().zip(&ks) {
        r = r.checked_sub(&k.multiply(&k.involution())?.scale(e))?;
    }
    let big_f = split_pluriharmonic(&r)?;
    let decomposition = Decomposition {
        weights_f,
        fs,
        weights_k,
        ks,
        big_f,
    };
    if !verify_decomposition(p, &decomposition) {
        return Err(NcError::InternalInconsistency(
            "decomposition does not re-expand to p".into(),
        ));
    }
    Ok(PlushVerdict::Plush {
        decomposition,
        certificate: Certificate {
            border,
            middle,
            q1,
            q5,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::evaluate;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str, g: usize) -> NcPoly {
        NcPoly::parse(s, g).unwrap()
    }

    fn screen_of(s: &str, g: usize) -> Screen {
        let q = complex_hessian(&p(s, g)).unwrap();
        let r = build_mmr(&q).unwrap();
        structural_screen(&q, &r.border, &r.middle).unwrap()
    }

    #[test]
    fn screens() {
        assert_eq!(screen_of("x1'*x1", 1), Screen::Pass);
        assert!(matches!(
            screen_of("x1'*x1*x1'*x1", 1),
            Screen::Violation(Violation::MixedBlock { .. })
        ));
        let q = p("h1'*h1*x1 + x1'*h1'*h1", 1);
        let r = build_mmr(&q).unwrap();
        assert_eq!(
            structural_screen(&q, &r.border, &r.middle).unwrap(),
            Screen::Violation(Violation::OddDegree { degree: 3 })
        );
    }

    #[test]
    fn single_square() {
        let v = decide_plush(&p("x1'*x1", 1)).unwrap();
        let PlushVerdict::Plush { decomposition, .. } = v else {
            panic!("{v:?}")
        };
        assert_eq!(decomposition.fs, vec![p("x1", 1)]);
        assert_eq!(decomposition.weights_f, vec![rat(1, 1)]);
        assert!(decomposition.ks.is_empty());
        assert!(decomposition.big_f.is_zero());
    }

    #[test]
    fn mixed_shape_example() {
        let src = "x1'*x1 + x2*x2' + x1*x2 + x2'*x1'";
        let v = decide_plush(&p(src, 2)).unwrap();
        let PlushVerdict::Plush { decomposition, .. } = v else {
            panic!("{v:?}")
        };
        assert_eq!(decomposition.fs, vec![p("x1", 2)]);
        assert_eq!(decomposition.ks, vec![p("x2", 2)]);
        assert_eq!(decomposition.big_f, p("x1*x2", 2));
    }

    #[test]
    fn constants_and_pluriharmonic() {
        let v = decide_plush(&p("3 + x1 + x1' + x1*x1 + x1'*x1'", 1)).unwrap();
        let PlushVerdict::Plush { decomposition, .. } = v else {
            panic!("{v:?}")
        };
        assert!(decomposition.fs.is_empty());
        assert_eq!(decomposition.big_f, p("x1*x1 + x1 + 3/2", 1));
    }

    #[test]
    fn weighted_squares() {
        let src = "2*x1'*x1'*x1*x1 + 2*x1'*x1 + 1/3*x2*x1*x1'*x2'";
        let v = decide_plush(&p(src, 2)).unwrap();
        let PlushVerdict::Plush { decomposition, .. } = &v else {
            panic!("{v:?}")
        };
        assert!(verify_decomposition(&p(src, 2), decomposition));
        assert!(v.report().starts_with("verdict: plush\n"));
    }

    #[test]
    fn quartic_refuted() {
        let pp = p("x1'*x1*x1'*x1", 1);
        let q = complex_hessian(&pp).unwrap();
        let v = decide_plush(&pp).unwrap();
        let PlushVerdict::NotPlush(c) = &v else {
            panic!("{v:?}")
        };
        assert_eq!(c.path, WitnessPath::MixedBlock);
        assert!(c.eigenvalue <= -1e-8);
        assert!((c.replay(&q).unwrap() - c.eigenvalue).abs() < 1e-12);
        assert!(c.x.size() <= 2);
        assert!(v.report().contains("path: mixed-block"));
    }

    #[test]
    fn negative_square_refuted() {
        let v = decide_plush(&p("-x1'*x1", 1)).unwrap();
        let PlushVerdict::NotPlush(c) = v else {
            panic!("{v:?}")
        };
        assert_eq!(c.path, WitnessPath::NegativePivot);
        assert_eq!(c.x.size(), 1);
    }

    #[test]
    fn witness_search_outcomes() {
        let policy = SamplePolicy::witness_search(2, 0);
        match find_witness(&p("-h1'*h1", 1), None, &policy).unwrap() {
            WitnessSearch::Found(c) => assert!(c.eigenvalue < -1e-8 && c.x.size() == 1),
            other => panic!("{other:?}"),
        }
        let small = SamplePolicy::new(vec![1, 2], 10, 1e-8, 0).unwrap();
        assert_eq!(
            find_witness(&p("h1'*h1", 1), None, &small).unwrap(),
            WitnessSearch::NotFound { samples: 20 }
        );
    }

    #[test]
    fn gram_matches_evaluation() {
        let q = complex_hessian(&p("x1'*x2*x1'*x1 + x2*x1'*x2'*x1 + x2'*x1*x1'*x2", 2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = MatrixTuple::random(2, 3, &mut rng);
        let h = MatrixTuple::random(2, 3, &mut rng);
        let v = DVector::from_fn(3, |i, _| [0.3, -0.7, 0.5][i]);
        let gram = direction_gram(&q, &x, &v).unwrap();
        let hv = DVector::from_iterator(18, h.matrices().iter().flat_map(|m| m.iter().copied()));
        let form = (hv.transpose() * &gram * &hv)[(0, 0)];
        let direct = (v.transpose() * evaluate(&q, &x, Some(&h)).unwrap() * &v)[(0, 0)];
        assert!((form - direct).abs() < 1e-10 * direct.abs().max(1.0));
    }

    #[test]
    fn decomposition_checks() {
        let pp = p("x1'*x1", 1);
        let good = Decomposition {
            weights_f: vec![rat(1, 1)],
            fs: vec![p("x1", 1)],
            weights_k: vec![],
            ks: vec![],
            big_f: NcPoly::zero(1),
        };
        assert!(verify_decomposition(&pp, &good));
        let dropped = Decomposition {
            weights_f: vec![],
            fs: vec![],
            ..good.clone()
        };
        assert!(!verify_decomposition(&pp, &dropped));
        // 2 x'x with the weight folded into f as a rational approximation of sqrt 2
        let folded = Decomposition {
            fs: vec![p("99/70*x1", 1)],
            ..good.clone()
        };
        assert!(!verify_decomposition(&p("2*x1'*x1", 1), &folded));
        let zero_weight = Decomposition {
            weights_f: vec![rat(0, 1)],
            ..good
        };
        assert!(!verify_decomposition(&pp, &zero_weight));
    }

    #[test]
    fn rejects_nonsymmetric() {
        assert_eq!(decide_plush(&p("x1'*x1*x1", 1)), Err(NcError::NotSymmetric));
    }
}
