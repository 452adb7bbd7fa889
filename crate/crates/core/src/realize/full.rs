//! Full column rank, and exact ranks `q-1`, `q-2` through a shrunken
//! interval matrix on which a fixed minor never vanishes.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use super::boxes::{initial_radius, nbhd};
use super::corank::{realize_rank_le_qm1, realize_rank_le_qm2};
use super::{certify, check_witness, pin_boundaries, rational_shortcut, require_tall, Branch, ColumnDepWitness, Mode, RealizationResult};
use crate::error::{Error, Result};
use crate::linalg::approx::{precision_budget, round_from};
use crate::linalg::{det, nonsingular_block, rank, Matrix, QuadMatrix};
use crate::number::{IntervalMatrix, RatInterval, Rational};

const VERTEX_LIMIT: usize = 12;

/// Strict sign of the determinant over a square box of matrices, if it
/// is constant. Exact by vertex enumeration for few varying entries;
/// otherwise a conservative interval expansion that may return `None`
/// for boxes whose determinant does keep a sign.
pub fn box_det_sign(b: &IntervalMatrix) -> Option<Ordering> {
    let n = b.rows();
    if n != b.cols() {
        return None;
    }
    if n == 0 {
        return Some(Ordering::Greater);
    }
    let cells: Vec<(usize, usize)> = b.entries().filter(|(_, _, iv)| !iv.is_degenerate()).map(|(i, j, _)| (i, j)).collect();
    if cells.len() <= VERTEX_LIMIT {
        let mut sign = None;
        for t in 0..1u32 << cells.len() {
            let mut v = b.map(|iv| iv.lo().clone());
            for (k, &(i, j)) in cells.iter().enumerate() {
                if t >> k & 1 == 1 {
                    v.set(i, j, b.get(i, j).hi().clone());
                }
            }
            let d = det(&v).ok()?;
            let s = d.cmp(&Rational::zero());
            if s == Ordering::Equal || sign.is_some_and(|p| p != s) {
                return None;
            }
            sign = Some(s);
        }
        return sign;
    }
    let total = leibniz(b);
    if total.lo().is_positive() {
        Some(Ordering::Greater)
    } else if total.hi().is_negative() {
        Some(Ordering::Less)
    } else {
        None
    }
}

fn leibniz(b: &IntervalMatrix) -> RatInterval {
    let n = b.rows();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut acc = RatInterval::point(Rational::zero());
    permute(&mut perm, 0, &mut |p| {
        let mut term = RatInterval::point(Rational::one());
        for (i, &j) in p.iter().enumerate() {
            term = term.mul(b.get(i, j));
        }
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |k| (i, k))).filter(|&(i, k)| p[i] > p[k]).count();
        acc = if inversions % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    });
    acc
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Shrinks the entries of the block `rows x cols` toward the witness until
/// the block determinant keeps a strict sign on the shrunken matrix.
fn shrink_block(alpha: &IntervalMatrix, w: &QuadMatrix, rows: &[usize], cols: &[usize]) -> Result<IntervalMatrix> {
    let mut eps = initial_radius(alpha.entries().map(|(_, _, iv)| iv));
    for _ in 0..4 * precision_budget() {
        let mut shrunk = alpha.clone();
        for &i in rows {
            for &j in cols {
                let iv = alpha.get(i, j);
                if !iv.is_degenerate() {
                    let n = nbhd(w.get(i, j), &eps).intersect(iv).unwrap_or_else(|| iv.clone());
                    shrunk.set(i, j, n);
                }
            }
        }
        let block = shrunk.submatrix(cols, rows)?;
        if box_det_sign(&block).is_some() {
            return Ok(shrunk);
        }
        eps = eps / Rational::from_integer(2.into());
    }
    Err(Error::ConstructionFailed("block determinant keeps vanishing near the witness".into()))
}

/// Rational matrix of rank `q` from a full-rank witness.
pub fn realize_full_rank(alpha: &IntervalMatrix, w: &QuadMatrix) -> Result<RealizationResult> {
    check_witness(alpha, w)?;
    require_tall(alpha)?;
    let q = alpha.cols();
    if rank(w) != q {
        return Err(Error::WitnessInvalid(format!("witness has rank {}, expected {q}", rank(w))));
    }
    if let Some(res) = rational_shortcut(alpha, w, q, Mode::Exact) {
        return Ok(res);
    }
    let pinned = pin_boundaries(alpha, w);
    let (rows, cols) = nonsingular_block(w);
    let shrunk = shrink_block(&pinned, w, &rows, &cols)?;
    let mut m = Matrix::zeros(alpha.rows(), q);
    for (i, j, iv) in shrunk.entries() {
        let v = round_from(w.get(i, j), iv, 0)
            .ok_or_else(|| Error::ConstructionFailed(format!("entry ({}, {}) could not be rounded", i + 1, j + 1)))?;
        m.set(i, j, v);
    }
    certify(alpha, m, q, Mode::Exact, BTreeSet::from([Branch::FullRankRounding, Branch::DeterminantShrink]))
}

/// Rational matrix of rank exactly `r ∈ {q-1, q-2}`.
pub fn realize_rank_exact(alpha: &IntervalMatrix, w: &QuadMatrix, r: usize) -> Result<RealizationResult> {
    check_witness(alpha, w)?;
    require_tall(alpha)?;
    let q = alpha.cols();
    if r + 1 != q && r + 2 != q {
        return Err(Error::WitnessInvalid(format!("exact-rank shrink handles ranks q-1 and q-2, got {r}")));
    }
    if rank(w) != r {
        return Err(Error::WitnessInvalid(format!("witness has rank {}, expected {r}", rank(w))));
    }
    if let Some(res) = rational_shortcut(alpha, w, r, Mode::Exact) {
        return Ok(res);
    }
    let (rows, cols) = nonsingular_block(w);
    let shrunk = shrink_block(&pin_boundaries(alpha, w), w, &rows, &cols)?;
    let (dep, order) = ColumnDepWitness::from_matrix(w, q - r)?;
    let permuted = shrunk.permute_cols(&order);
    let res = if q - r == 1 {
        realize_rank_le_qm1(&permuted, &dep)?
    } else {
        realize_rank_le_qm2(&permuted, &dep)?
    };
    let mut inverse = vec![0; q];
    for (k, &j) in order.iter().enumerate() {
        inverse[j] = k;
    }
    let mut branches = res.branches;
    branches.insert(Branch::DeterminantShrink);
    certify(alpha, res.matrix.permute_cols(&inverse), r, Mode::Exact, branches)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RationalMatrix;
    use crate::number::{int, QuadExt};

    fn iv(lo: i64, hi: i64) -> RatInterval {
        RatInterval::new(int(lo), int(hi)).unwrap()
    }

    #[test]
    fn det_sign_on_boxes() {
        let m = Matrix::from_rows(vec![vec![iv(2, 4), iv(1, 1)], vec![iv(1, 1), iv(2, 4)]]).unwrap();
        assert_eq!(box_det_sign(&m), Some(Ordering::Greater));
        let z = Matrix::from_rows(vec![vec![iv(-1, 1)]]).unwrap();
        assert_eq!(box_det_sign(&z), None);
        let big = IntervalMatrix::point(&RationalMatrix::identity(4)).map(|x| {
            RatInterval::new(x.lo() - crate::number::rat(1, 100), x.hi() + crate::number::rat(1, 100)).unwrap()
        });
        assert_eq!(box_det_sign(&big), Some(Ordering::Greater));
    }

    #[test]
    fn full_rank_from_irrational_witness() {
        let h = QuadExt::new(Rational::zero(), crate::number::rat(1, 2), 2).unwrap();
        let w = Matrix::from_rows(vec![vec![QuadExt::one(), h], vec![QuadExt::zero(), QuadExt::one()]]).unwrap();
        let alpha = Matrix::from_fn(2, 2, |_, _| iv(0, 1));
        let res = realize_full_rank(&alpha, &w).unwrap();
        assert_eq!(rank(&res.matrix), 2);
        let point = IntervalMatrix::point(&RationalMatrix::identity(3));
        let res = realize_full_rank(&point, &RationalMatrix::identity(3).to_quad()).unwrap();
        assert_eq!(res.matrix, RationalMatrix::identity(3));
    }
}
