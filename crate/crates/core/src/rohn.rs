//! Full-rank tests for interval matrices: the sign-pair determinant test
//! for square matrices, the orthant feasibility test for tall matrices,
//! and a vertex-enumeration oracle.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::lp::{lp_feasible, Inequality};
use crate::linalg::{det, Matrix, RationalMatrix};
use crate::number::{IntervalMatrix, Rational};

/// Entries in `{-1, +1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector(pub Vec<i8>);

impl SignVector {
    /// The `index`-th vector in binary counting order: bit `k` set means
    /// entry `k` is `-1`.
    pub fn from_index(n: usize, index: u64) -> Self {
        SignVector((0..n).map(|k| if index >> k & 1 == 1 { -1 } else { 1 }).collect())
    }

    pub fn all(n: usize) -> impl Iterator<Item = SignVector> {
        (0..1u64 << n).map(move |t| SignVector::from_index(n, t))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, k: usize) -> Rational {
        Rational::from_integer(self.0[k].into())
    }
}

impl std::fmt::Display for SignVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<&str> = self.0.iter().map(|&v| if v < 0 { "-" } else { "+" }).collect();
        write!(f, "{}", s.concat())
    }
}

/// Why a matrix failed a full-rank test.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    /// `det(mid) * det(mid - T_x rad T_y) <= 0`.
    SignPair {
        x: SignVector,
        y: SignVector,
        det_mid: Rational,
        det_pair: Rational,
    },
    /// A nonzero `x` in orthant `signs` with `|mid x| <= rad |x|`.
    Orthant { signs: SignVector, x: Vec<Rational> },
    /// Two vertex matrices with determinants of opposite sign, or one zero.
    Vertex { low: Rational, high: Rational },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub full_rank: bool,
    pub violation: Option<Violation>,
}

impl Verdict {
    fn pass() -> Self {
        Verdict { full_rank: true, violation: None }
    }

    fn fail(v: Violation) -> Self {
        Verdict { full_rank: false, violation: Some(v) }
    }
}

/// `mid - T_x rad T_y`.
fn shifted(mid: &RationalMatrix, rad: &RationalMatrix, x: &SignVector, y: &SignVector) -> RationalMatrix {
    Matrix::from_fn(mid.rows(), mid.cols(), |i, j| mid.get(i, j) - x.get(i) * rad.get(i, j) * y.get(j))
}

fn require_square(m: &IntervalMatrix) -> Result<usize> {
    if m.rows() != m.cols() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    Ok(m.rows())
}

/// Every `(x, y, det(mid - T_x rad T_y))` in enumeration order.
pub fn sign_pair_determinants(m: &IntervalMatrix) -> Result<Vec<(SignVector, SignVector, Rational)>> {
    let p = require_square(m)?;
    let (mid, rad) = (m.mid(), m.rad());
    let mut out = Vec::with_capacity(1 << (2 * p));
    for x in SignVector::all(p) {
        for y in SignVector::all(p) {
            let d = det(&shifted(&mid, &rad, &x, &y))?;
            out.push((x.clone(), y, d));
        }
    }
    Ok(out)
}

/// Sign-pair test with the first violating pair, if any.
pub fn square_verdict(m: &IntervalMatrix) -> Result<Verdict> {
    let p = require_square(m)?;
    let (mid, rad) = (m.mid(), m.rad());
    let det_mid = det(&mid)?;
    for x in SignVector::all(p) {
        for y in SignVector::all(p) {
            let det_pair = det(&shifted(&mid, &rad, &x, &y))?;
            if !(&det_mid * &det_pair).is_positive() {
                return Ok(Verdict::fail(Violation::SignPair { x, y, det_mid, det_pair }));
            }
        }
    }
    Ok(Verdict::pass())
}

pub fn square_full_rank(m: &IntervalMatrix) -> Result<bool> {
    Ok(square_verdict(m)?.full_rank)
}

/// The linear system of one orthant: `s_j x_j >= 0`,
/// `-rad S x <= mid x <= rad S x`, `sum s_j x_j = 1`.
pub fn orthant_system(mid: &RationalMatrix, rad: &RationalMatrix, s: &SignVector) -> Vec<Inequality> {
    let (p, q) = mid.shape();
    let mut sys = Vec::with_capacity(q + 2 * p + 2);
    for j in 0..q {
        let mut c = vec![Rational::zero(); q];
        c[j] = s.get(j);
        sys.push(Inequality::ge(c, Rational::zero()));
    }
    for i in 0..p {
        let up: Vec<Rational> = (0..q).map(|j| mid.get(i, j) - rad.get(i, j) * s.get(j)).collect();
        let down: Vec<Rational> = (0..q).map(|j| -mid.get(i, j) - rad.get(i, j) * s.get(j)).collect();
        sys.push(Inequality::le(up, Rational::zero()));
        sys.push(Inequality::le(down, Rational::zero()));
    }
    sys.extend(Inequality::eq((0..q).map(|j| s.get(j)).collect(), Rational::one()));
    sys
}

/// Orthant test. Wide matrices are tested through their transpose.
pub fn rect_verdict(m: &IntervalMatrix) -> Verdict {
    let m = if m.rows() < m.cols() { m.transpose() } else { m.clone() };
    let q = m.cols();
    let (mid, rad) = (m.mid(), m.rad());
    for s in SignVector::all(q) {
        if let Some(x) = lp_feasible(q, &orthant_system(&mid, &rad, &s)) {
            return Verdict::fail(Violation::Orthant { signs: s, x });
        }
    }
    Verdict::pass()
}

pub fn rect_full_rank(m: &IntervalMatrix) -> bool {
    rect_verdict(m).full_rank
}

pub const ORACLE_MAX_ENTRIES: usize = 16;

/// Vertex-determinant oracle for square matrices with at most 16 entries.
pub fn oracle_verdict(m: &IntervalMatrix) -> Result<Verdict> {
    let p = require_square(m)?;
    if p * p > ORACLE_MAX_ENTRIES {
        return Err(Error::TooLarge(format!("{p}x{p} exceeds the vertex oracle limit")));
    }
    let cells: Vec<(usize, usize)> = m.entries().filter(|(_, _, iv)| !iv.is_degenerate()).map(|(i, j, _)| (i, j)).collect();
    let mut lowest: Option<Rational> = None;
    let mut highest: Option<Rational> = None;
    for t in 0..1u64 << cells.len() {
        let mut v = m.map(|iv| iv.lo().clone());
        for (k, &(i, j)) in cells.iter().enumerate() {
            if t >> k & 1 == 1 {
                v.set(i, j, m.get(i, j).hi().clone());
            }
        }
        let d = det(&v)?;
        if lowest.as_ref().is_none_or(|l| &d < l) {
            lowest = Some(d.clone());
        }
        if highest.as_ref().is_none_or(|h| &d > h) {
            highest = Some(d);
        }
    }
    let (low, high) = (lowest.unwrap_or_default(), highest.unwrap_or_default());
    if low.is_positive() || high.is_negative() {
        Ok(Verdict::pass())
    } else {
        Ok(Verdict::fail(Violation::Vertex { low, high }))
    }
}

pub fn regularity_oracle(m: &IntervalMatrix) -> Result<bool> {
    Ok(oracle_verdict(m)?.full_rank)
}
