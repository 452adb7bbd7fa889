//! Interval matrices: grids of rational intervals.

use super::interval::RatInterval;
use super::quad::QuadExt;
use super::rational::Rational;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, QuadMatrix, RationalMatrix};

pub type IntervalMatrix = Matrix<RatInterval>;

/// Values that can be tested for membership in a rational interval.
pub trait Member {
    fn is_in(&self, iv: &RatInterval) -> bool;
}

impl Member for Rational {
    fn is_in(&self, iv: &RatInterval) -> bool {
        iv.contains(self)
    }
}

impl Member for QuadExt {
    fn is_in(&self, iv: &RatInterval) -> bool {
        iv.contains_quad(self)
    }
}

impl IntervalMatrix {
    /// The degenerate interval matrix `{a}`.
    pub fn point(a: &RationalMatrix) -> Self {
        a.map(|x| RatInterval::point(x.clone()))
    }

    pub fn mid(&self) -> RationalMatrix {
        self.map(RatInterval::mid)
    }

    pub fn rad(&self) -> RationalMatrix {
        self.map(RatInterval::rad)
    }

    pub fn modulus(&self) -> RationalMatrix {
        self.map(RatInterval::modulus)
    }

    pub fn mid_rad_mod(&self) -> (RationalMatrix, RationalMatrix, RationalMatrix) {
        (self.mid(), self.rad(), self.modulus())
    }

    /// Exact entrywise membership of `a`.
    pub fn contains<T: Member + Clone>(&self, a: &Matrix<T>) -> Result<bool> {
        if self.shape() != a.shape() {
            return Err(Error::DimensionMismatch {
                expected: format!("{}x{}", self.rows(), self.cols()),
                found: format!("{}x{}", a.rows(), a.cols()),
            });
        }
        Ok(self.entries().all(|(i, j, iv)| a.get(i, j).is_in(iv)))
    }

    pub fn contains_quad(&self, a: &QuadMatrix) -> Result<bool> {
        self.contains(a)
    }

    /// Componentwise interval containment `self ⊂ other`.
    pub fn is_subset_of(&self, other: &IntervalMatrix) -> bool {
        self.shape() == other.shape()
            && self.entries().all(|(i, j, iv)| iv.is_subset_of(other.get(i, j)))
    }

    pub fn degenerate_cells(&self) -> Vec<(usize, usize)> {
        self.entries()
            .filter(|(_, _, iv)| iv.is_degenerate())
            .map(|(i, j, _)| (i, j))
            .collect()
    }

    pub fn is_point(&self) -> bool {
        self.entries().all(|(_, _, iv)| iv.is_degenerate())
    }

    /// Whether the degenerate entries of `self` are matched exactly by `a`.
    pub fn degenerate_exact(&self, a: &RationalMatrix) -> bool {
        self.entries()
            .filter(|(_, _, iv)| iv.is_degenerate())
            .all(|(i, j, iv)| a.get(i, j) == iv.lo())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{int, rat};

    fn iv(lo: i64, hi: i64) -> RatInterval {
        RatInterval::new(int(lo), int(hi)).unwrap()
    }

    #[test]
    fn mid_rad_mod_examples() {
        let m = Matrix::from_rows(vec![vec![iv(1, 3), iv(-2, -2), iv(-1, 5)]]).unwrap();
        let (mid, rad, md) = m.mid_rad_mod();
        assert_eq!(mid.row(0), &[int(2), int(-2), int(2)]);
        assert_eq!(rad.row(0), &[int(1), int(0), int(3)]);
        assert_eq!(md.row(0), &[int(3), int(2), int(5)]);
        for (i, j, e) in m.entries() {
            assert_eq!(mid.get(i, j) - rad.get(i, j), *e.lo());
            assert_eq!(mid.get(i, j) + rad.get(i, j), *e.hi());
        }
    }

    #[test]
    fn containment() {
        let m = Matrix::from_fn(2, 2, |_, _| iv(-1, 1));
        assert!(m.contains(&RationalMatrix::zeros(2, 2)).unwrap());
        let s = Matrix::from_rows(vec![vec![RatInterval::new(int(1), rat(3, 2)).unwrap()]]).unwrap();
        let root = Matrix::from_rows(vec![vec![QuadExt::sqrt(2).unwrap()]]).unwrap();
        assert!(s.contains(&root).unwrap());
        let p = Matrix::from_rows(vec![vec![iv(2, 2)]]).unwrap();
        assert!(p.contains(&Matrix::from_rows(vec![vec![int(2)]]).unwrap()).unwrap());
        assert!(m.contains(&RationalMatrix::zeros(1, 2)).is_err());
    }
}
