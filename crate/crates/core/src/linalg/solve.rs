//! Exact solution sets of linear systems.

use super::elim::rref;
use super::matrix::{Matrix, Scalar};
use crate::error::{Error, Result};
use crate::number::Rational;

/// `coeffs * x = rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSystem<T: Scalar = Rational> {
    pub coeffs: Matrix<T>,
    pub rhs: Vec<T>,
}

impl<T: Scalar> LinearSystem<T> {
    pub fn new(coeffs: Matrix<T>, rhs: Vec<T>) -> Result<Self> {
        if coeffs.rows() != rhs.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} right-hand sides", coeffs.rows()),
                found: format!("{}", rhs.len()),
            });
        }
        Ok(LinearSystem { coeffs, rhs })
    }

    /// Builds a system in `vars` unknowns from `(row, rhs)` pairs.
    pub fn from_equations(vars: usize, eqs: Vec<(Vec<T>, T)>) -> Result<Self> {
        let rows = eqs.len();
        let mut data = Vec::with_capacity(rows * vars);
        let mut rhs = Vec::with_capacity(rows);
        for (row, b) in eqs {
            if row.len() != vars {
                return Err(Error::DimensionMismatch {
                    expected: format!("{vars} coefficients"),
                    found: format!("{}", row.len()),
                });
            }
            data.extend(row);
            rhs.push(b);
        }
        Ok(LinearSystem {
            coeffs: Matrix::from_vec(rows, vars, data)?,
            rhs,
        })
    }

    /// The empty system in `vars` unknowns.
    pub fn unconstrained(vars: usize) -> Self {
        LinearSystem {
            coeffs: Matrix::zeros(0, vars),
            rhs: Vec::new(),
        }
    }

    pub fn vars(&self) -> usize {
        self.coeffs.cols()
    }

    pub fn is_solved_by(&self, x: &[T]) -> bool {
        self.coeffs
            .mul_vec(x)
            .map(|ax| ax == self.rhs)
            .unwrap_or(false)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> LinearSystem<U> {
        LinearSystem {
            coeffs: self.coeffs.map(&f),
            rhs: self.rhs.iter().map(f).collect(),
        }
    }
}

/// Solution set `particular + span(kernel)`, parametrized by the free
/// variables of the reduced echelon form.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSolution<T: Scalar> {
    pub particular: Vec<T>,
    pub kernel: Vec<Vec<T>>,
    pub pivots: Vec<usize>,
    pub free: Vec<usize>,
    vars: usize,
    reduced: Matrix<T>,
    reduced_rhs: Vec<T>,
}

impl<T: Scalar> AffineSolution<T> {
    /// The solution whose free variables take `values` (in `self.free` order).
    pub fn with_free(&self, values: &[T]) -> Vec<T> {
        let n = self.vars;
        let mut x = vec![T::zero(); n];
        for (&f, v) in self.free.iter().zip(values) {
            x[f] = v.clone();
        }
        for (r, &pc) in self.pivots.iter().enumerate() {
            let mut v = self.reduced_rhs[r].clone();
            for &f in &self.free {
                v = v.sub(&self.reduced.get(r, f).mul(&x[f]));
            }
            x[pc] = v;
        }
        x
    }

    pub fn dimension(&self) -> usize {
        self.free.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Solution<T: Scalar> {
    Feasible(AffineSolution<T>),
    Infeasible,
}

impl<T: Scalar> Solution<T> {
    pub fn feasible(self) -> Option<AffineSolution<T>> {
        match self {
            Solution::Feasible(s) => Some(s),
            Solution::Infeasible => None,
        }
    }
}

/// Exact affine description of the solution set, or `Infeasible` when the
/// augmented matrix has larger rank.
pub fn solve<T: Scalar>(sys: &LinearSystem<T>) -> Solution<T> {
    let n = sys.vars();
    let m = sys.coeffs.rows();
    let aug = Matrix::from_fn(m, n + 1, |i, j| {
        if j < n {
            sys.coeffs.get(i, j).clone()
        } else {
            sys.rhs[i].clone()
        }
    });
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&n) {
        return Solution::Infeasible;
    }
    let free: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
    let reduced = Matrix::from_fn(pivots.len(), n, |i, j| r.get(i, j).clone());
    let reduced_rhs: Vec<T> = (0..pivots.len()).map(|i| r.get(i, n).clone()).collect();
    let mut sol = AffineSolution {
        particular: Vec::new(),
        kernel: Vec::new(),
        pivots,
        free,
        vars: n,
        reduced,
        reduced_rhs,
    };
    let zeros = vec![T::zero(); sol.free.len()];
    sol.particular = sol.with_free(&zeros);
    let kernel = (0..sol.free.len())
        .map(|k| {
            let mut e = vec![T::zero(); sol.free.len()];
            e[k] = T::one();
            let p = sol.with_free(&e);
            p.iter().zip(&sol.particular).map(|(a, b)| a.sub(b)).collect()
        })
        .collect();
    sol.kernel = kernel;
    Solution::Feasible(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::int;

    fn sys(rows: &[(&[i64], i64)]) -> LinearSystem {
        let vars = rows[0].0.len();
        LinearSystem::from_equations(
            vars,
            rows.iter()
                .map(|(r, b)| (r.iter().map(|&x| int(x)).collect(), int(*b)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn unique_solution() {
        let s = solve(&sys(&[(&[1, 1], 2), (&[1, -1], 0)])).feasible().unwrap();
        assert_eq!(s.particular, vec![int(1), int(1)]);
        assert!(s.kernel.is_empty());
    }

    #[test]
    fn infeasible() {
        assert_eq!(solve(&sys(&[(&[0], 1)])), Solution::Infeasible);
    }

    #[test]
    fn one_parameter_family() {
        let s = solve(&sys(&[(&[1, 1], 1)])).feasible().unwrap();
        assert_eq!(s.particular, vec![int(1), int(0)]);
        assert_eq!(s.kernel, vec![vec![int(-1), int(1)]]);
        assert_eq!(s.free, vec![1]);
    }

    #[test]
    fn empty_system() {
        let s = solve(&LinearSystem::<Rational>::unconstrained(2)).feasible().unwrap();
        assert_eq!(s.dimension(), 2);
        assert_eq!(s.with_free(&[int(3), int(4)]), vec![int(3), int(4)]);
    }
}
