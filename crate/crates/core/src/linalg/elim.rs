//! Rank, determinant and reduced row echelon form.
//!
//! Pivots are always the first nonzero candidate in the current column,
//! scanning rows top to bottom, so results are deterministic.

use super::matrix::{Matrix, Scalar};
use crate::error::{Error, Result};

/// Fraction-free (Bareiss) forward elimination. Returns the rank and, for
/// square input, the determinant.
fn bareiss<T: Scalar>(m: &Matrix<T>) -> (usize, T) {
    let (rows, cols) = m.shape();
    let mut a = m.to_rows();
    let mut prev = T::one();
    let mut sign_flip = false;
    let mut r = 0;
    for j in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][j].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            sign_flip = !sign_flip;
        }
        for i in r + 1..rows {
            for k in j + 1..cols {
                let v = a[r][j].mul(&a[i][k]).sub(&a[i][j].mul(&a[r][k]));
                a[i][k] = v.div(&prev);
            }
            a[i][j] = T::zero();
        }
        prev = a[r][j].clone();
        r += 1;
    }
    let det = if rows == cols && r == rows {
        if sign_flip {
            prev.neg()
        } else {
            prev
        }
    } else {
        T::zero()
    };
    (r, det)
}

/// Exact rank by fraction-free elimination.
pub fn rank<T: Scalar>(m: &Matrix<T>) -> usize {
    bareiss(m).0
}

pub fn det<T: Scalar>(m: &Matrix<T>) -> Result<T> {
    if m.rows() != m.cols() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.rows() == 0 {
        return Ok(T::one());
    }
    Ok(bareiss(m).1)
}

/// Reduced row echelon form over the field. Returns the reduced matrix and
/// the pivot columns.
pub fn rref<T: Scalar>(m: &Matrix<T>) -> (Matrix<T>, Vec<usize>) {
    let (rows, cols) = m.shape();
    let mut a = m.to_rows();
    let mut pivots = Vec::new();
    let mut r = 0;
    for j in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][j].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let inv = T::one().div(&a[r][j]);
        for k in j..cols {
            a[r][k] = a[r][k].mul(&inv);
        }
        for i in 0..rows {
            if i != r && !a[i][j].is_zero() {
                let f = a[i][j].clone();
                for k in j..cols {
                    let v = a[i][k].sub(&f.mul(&a[r][k]));
                    a[i][k] = v;
                }
            }
        }
        pivots.push(j);
        r += 1;
    }
    (Matrix::from_rows(a).unwrap_or_else(|_| Matrix::zeros(rows, cols)), pivots)
}

/// Rank by plain field elimination; an independent route to [`rank`].
pub fn field_rank<T: Scalar>(m: &Matrix<T>) -> usize {
    rref(m).1.len()
}

/// Basis of the right kernel read off the reduced echelon form: one vector
/// per free column, with a `1` in that column.
pub fn kernel_basis<T: Scalar>(m: &Matrix<T>) -> Vec<Vec<T>> {
    let (r, pivots) = rref(m);
    let cols = m.cols();
    (0..cols)
        .filter(|j| !pivots.contains(j))
        .map(|f| {
            let mut v = vec![T::zero(); cols];
            v[f] = T::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = r.get(row, f).neg();
            }
            v
        })
        .collect()
}

/// Indices of a maximal set of linearly independent rows, chosen greedily
/// top to bottom.
pub fn independent_rows<T: Scalar>(m: &Matrix<T>) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..m.rows() {
        let mut trial = chosen.clone();
        trial.push(i);
        let sub = m
            .submatrix(&(0..m.cols()).collect::<Vec<_>>(), &trial)
            .expect("row index in range");
        if rank(&sub) == trial.len() {
            chosen = trial;
        }
    }
    chosen
}

/// Rows and columns of a nonsingular `rank x rank` submatrix.
pub fn nonsingular_block<T: Scalar>(m: &Matrix<T>) -> (Vec<usize>, Vec<usize>) {
    let rows = independent_rows(m);
    let all: Vec<usize> = (0..m.cols()).collect();
    let sub = m.submatrix(&all, &rows).expect("in range");
    let cols = independent_rows(&sub.transpose());
    (rows, cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RationalMatrix;
    use crate::number::{int, QuadExt};

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&RationalMatrix::identity(3)), 3);
        assert_eq!(rank(&m(&[&[1, 0, 2], &[0, 1, 3]])), 2);
        let s = QuadExt::sqrt(2).unwrap();
        let q = Matrix::from_rows(vec![
            vec![QuadExt::one(), s.clone()],
            vec![s, QuadExt::from_rational(int(2))],
        ])
        .unwrap();
        assert_eq!(rank(&q), 1);
        assert_eq!(field_rank(&q), 1);
        assert_eq!(rank(&m(&[&[0, 0], &[0, 0]])), 0);
    }

    #[test]
    fn det_examples() {
        assert_eq!(det(&m(&[&[3, 1], &[1, 3]])).unwrap(), int(8));
        assert_eq!(det(&RationalMatrix::identity(5)).unwrap(), int(1));
        assert_eq!(det(&m(&[&[1, 2, 3], &[1, 2, 3], &[4, 0, 1]])).unwrap(), int(0));
        assert_eq!(det(&m(&[&[0, 1], &[1, 0]])).unwrap(), int(-1));
        assert!(matches!(det(&m(&[&[1, 2]])), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        let a = m(&[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]);
        // 2*(3*-2 - 4*5) - (-1)*(1*-2 - 0) + 0 = -52 - 2
        assert_eq!(det(&a).unwrap(), int(-54));
    }

    #[test]
    fn kernel_basis_simple() {
        let k = kernel_basis(&m(&[&[1, 1]]));
        assert_eq!(k, vec![vec![int(-1), int(1)]]);
    }

    #[test]
    fn nonsingular_block_found() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        let (r, c) = nonsingular_block(&a);
        assert_eq!((r.clone(), c.clone()), (vec![0, 2], vec![0, 1]));
        assert_ne!(det(&a.submatrix(&c, &r).unwrap()).unwrap(), int(0));
    }
}
