//! Kernel generators built from maximal minors.
//!
//! For column indices `j_1 < ... < j_{s+1}` and row indices `i_1 < ... < i_s`
//! the generator has entry `(-1)^l det(A^{(j_1..^j_l..j_{s+1})}_{(i_1..i_s)})`
//! at position `j_l` (with `l` counted from one) and zeros elsewhere.

use super::elim::{det, rank};
use super::matrix::{Matrix, Scalar};
use crate::error::{Error, Result};

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// The minor vector for row set `rows` (size `s`) and column set `cols`
/// (size `s + 1`).
pub fn minor_vector<T: Scalar>(a: &Matrix<T>, rows: &[usize], cols: &[usize]) -> Result<Vec<T>> {
    debug_assert_eq!(rows.len() + 1, cols.len());
    let mut v = vec![T::zero(); a.cols()];
    for (l, &jl) in cols.iter().enumerate() {
        let rest: Vec<usize> = cols.iter().copied().filter(|&j| j != jl).collect();
        let minor = det(&a.submatrix(&rest, rows)?)?;
        // l is zero-based here, so (-1)^(l+1)
        v[jl] = if l % 2 == 0 { minor.neg() } else { minor };
    }
    Ok(v)
}

/// Which form of the generator family to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelVariant {
    /// `A` is `k x n` with `rk(A) = k < n`; all row indices are used.
    FullRowRank,
    /// `A` is `m x n` with `n > rk(A) >= k`; generators over row subsets.
    RowSubsets,
}

/// Nonzero kernel generators of `a`, duplicates removed, in generation order.
///
/// For [`KernelVariant::RowSubsets`] only subset sizes `s >= rk(a)` are used:
/// a generator with `s < rk(a)` pairs a sub-kernel with rows outside the
/// chosen set and is not a kernel vector in general, and minors of size
/// above the rank vanish.
pub fn kernel_generators<T: Scalar>(
    a: &Matrix<T>,
    k: usize,
    variant: KernelVariant,
) -> Result<Vec<Vec<T>>> {
    let (m, n) = a.shape();
    let rk = rank(a);
    let mut out: Vec<Vec<T>> = Vec::new();
    let push = |v: Vec<T>, out: &mut Vec<Vec<T>>| {
        if v.iter().any(|x| !x.is_zero()) && !out.contains(&v) {
            out.push(v);
        }
    };
    match variant {
        KernelVariant::FullRowRank => {
            if !(rk == k && k == m && m < n) {
                return Err(Error::RankPreconditionViolated(format!(
                    "need rank = k = rows < cols, got rank {rk}, k {k}, shape {m}x{n}"
                )));
            }
            let rows: Vec<usize> = (0..m).collect();
            for cols in subsets(n, k + 1) {
                push(minor_vector(a, &rows, &cols)?, &mut out);
            }
        }
        KernelVariant::RowSubsets => {
            if !(n > rk && rk >= k && k >= 1) {
                return Err(Error::RankPreconditionViolated(format!(
                    "need cols > rank >= k >= 1, got rank {rk}, k {k}, {n} columns"
                )));
            }
            let s = rk.max(k);
            if s <= m.min(n - 1) {
                for rows in subsets(m, s) {
                    for cols in subsets(n, s + 1) {
                        push(minor_vector(a, &rows, &cols)?, &mut out);
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RationalMatrix;
    use crate::number::int;

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn worked_two_by_three() {
        let a = m(&[&[1, 0, 2], &[0, 1, 3]]);
        let g = kernel_generators(&a, 2, KernelVariant::FullRowRank).unwrap();
        assert_eq!(g, vec![vec![int(2), int(3), int(-1)]]);
        assert!(a.mul_vec(&g[0]).unwrap().iter().all(|x| *x == int(0)));
    }

    #[test]
    fn single_row() {
        let g = kernel_generators(&m(&[&[1, 1]]), 1, KernelVariant::FullRowRank).unwrap();
        assert_eq!(g, vec![vec![int(-1), int(1)]]);
    }

    #[test]
    fn precondition_checked() {
        let id = RationalMatrix::identity(2);
        assert!(matches!(
            kernel_generators(&id, 2, KernelVariant::FullRowRank),
            Err(Error::RankPreconditionViolated(_))
        ));
        assert!(kernel_generators(&id, 1, KernelVariant::RowSubsets).is_err());
    }

    #[test]
    fn uniform_sign_list_fails_membership() {
        // Placing (-1)^(k+1) det(A^{(1..k)}) at position j and alternating the
        // leading entries from +det(A^{(2..k,j)}) does not give a kernel vector
        // on the worked example; the alternating (-1)^l form does.
        let a = m(&[&[1, 0, 2], &[0, 1, 3]]);
        let d23 = det(&a.submatrix(&[1, 2], &[0, 1]).unwrap()).unwrap();
        let d13 = det(&a.submatrix(&[0, 2], &[0, 1]).unwrap()).unwrap();
        let d12 = det(&a.submatrix(&[0, 1], &[0, 1]).unwrap()).unwrap();
        let naive = vec![d23.clone(), -d13.clone(), -d12.clone()];
        assert_ne!(a.mul_vec(&naive).unwrap(), vec![int(0), int(0)]);
        let cor = vec![-d23, d13, -d12];
        assert_eq!(a.mul_vec(&cor).unwrap(), vec![int(0), int(0)]);
    }

    #[test]
    fn subsets_lexicographic() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(2, 3), Vec::<Vec<usize>>::new());
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
    }
}
