//! Closed intervals with rational endpoints.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};

use super::quad::QuadExt;
use super::rational::{format_rational, max_rat, min_rat, parse_rational, Rational};
use crate::error::{Error, Result};

/// `[lo, hi]` with `lo <= hi`. Degenerate when `lo == hi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatInterval {
    lo: Rational,
    hi: Rational,
}

impl RatInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidInterval {
                lo: format_rational(&lo),
                hi: format_rational(&hi),
            });
        }
        Ok(RatInterval { lo, hi })
    }

    pub fn point(x: Rational) -> Self {
        RatInterval {
            lo: x.clone(),
            hi: x,
        }
    }

    /// Smallest interval containing both values.
    pub fn hull(a: Rational, b: Rational) -> Self {
        if a <= b {
            RatInterval { lo: a, hi: b }
        } else {
            RatInterval { lo: b, hi: a }
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn rad(&self) -> Rational {
        (&self.hi - &self.lo) / Rational::from_integer(2.into())
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// `max(|lo|, |hi|)`.
    pub fn modulus(&self) -> Rational {
        max_rat(&self.lo.abs(), &self.hi.abs())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Rational::zero())
    }

    /// Exact membership of a quadratic-field value.
    pub fn contains_quad(&self, x: &QuadExt) -> bool {
        x.cmp_rational(&self.lo) != Ordering::Less && x.cmp_rational(&self.hi) != Ordering::Greater
    }

    /// Membership in the open interval `(lo, hi)`.
    pub fn interior_contains_quad(&self, x: &QuadExt) -> bool {
        x.cmp_rational(&self.lo) == Ordering::Greater && x.cmp_rational(&self.hi) == Ordering::Less
    }

    pub fn is_subset_of(&self, other: &RatInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersect(&self, other: &RatInterval) -> Option<RatInterval> {
        let lo = max_rat(&self.lo, &other.lo);
        let hi = min_rat(&self.hi, &other.hi);
        (lo <= hi).then_some(RatInterval { lo, hi })
    }

    /// Strictly positive or strictly negative throughout.
    pub fn is_sign_definite(&self) -> bool {
        self.lo.is_positive() || self.hi.is_negative()
    }

    pub fn add(&self, other: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn neg(&self) -> RatInterval {
        RatInterval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    /// Exact range of `x*y`: min and max over the four endpoint products.
    pub fn mul(&self, other: &RatInterval) -> RatInterval {
        let prods = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = prods.iter().min().cloned().expect("four products");
        let hi = prods.iter().max().cloned().expect("four products");
        RatInterval { lo, hi }
    }

    pub fn scale(&self, r: &Rational) -> RatInterval {
        RatInterval::hull(&self.lo * r, &self.hi * r)
    }

    /// `{x/y : x in self, y in other}`; the divisor must exclude zero.
    pub fn div(&self, other: &RatInterval) -> Result<RatInterval> {
        if other.contains_zero() {
            return Err(Error::DivisorContainsZero(other.to_string()));
        }
        let inv = RatInterval::hull(other.hi.recip(), other.lo.recip());
        Ok(self.mul(&inv))
    }
}

pub fn interval_add(a: &RatInterval, b: &RatInterval) -> RatInterval {
    a.add(b)
}

pub fn interval_mul(a: &RatInterval, b: &RatInterval) -> RatInterval {
    a.mul(b)
}

pub fn interval_div(a: &RatInterval, b: &RatInterval) -> Result<RatInterval> {
    a.div(b)
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", format_rational(&self.lo), format_rational(&self.hi))
    }
}

/// Parses `lo:hi`. Surrounding brackets (`[lo:hi]`) and a bare rational
/// (degenerate interval) are accepted on input.
pub fn parse_interval(s: &str) -> Result<RatInterval> {
    let t = s.trim();
    let t = t
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .unwrap_or(t);
    match t.split_once(':') {
        Some((lo, hi)) => {
            let lo = parse_rational(lo)?;
            let hi = parse_rational(hi)?;
            RatInterval::new(lo, hi).map_err(|e| Error::Parse {
                line: 0,
                column: 0,
                message: e.to_string(),
            })
        }
        None => Ok(RatInterval::point(parse_rational(t)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::rational::{int, rat};

    fn iv(a: Rational, b: Rational) -> RatInterval {
        RatInterval::new(a, b).unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(interval_add(&iv(int(0), int(1)), &iv(int(0), int(0))), iv(int(0), int(1)));
        assert_eq!(interval_add(&iv(int(1), int(3)), &iv(int(-2), int(-1))), iv(int(-1), int(2)));
        assert_eq!(
            interval_add(&iv(rat(1, 2), rat(1, 2)), &iv(rat(1, 3), rat(2, 3))),
            iv(rat(5, 6), rat(7, 6))
        );
    }

    #[test]
    fn mul_examples() {
        assert_eq!(interval_mul(&iv(int(2), int(3)), &iv(int(0), int(0))), iv(int(0), int(0)));
        assert_eq!(interval_mul(&iv(int(-1), int(2)), &iv(int(-1), int(2))), iv(int(-2), int(4)));
        let ab = iv(rat(-3, 7), int(5));
        assert_eq!(interval_mul(&iv(int(1), int(1)), &ab), ab);
    }

    #[test]
    fn div_examples() {
        assert_eq!(interval_div(&iv(int(2), int(4)), &iv(int(2), int(2))).unwrap(), iv(int(1), int(2)));
        assert_eq!(interval_div(&iv(int(1), int(1)), &iv(int(1), int(2))).unwrap(), iv(rat(1, 2), int(1)));
        assert!(matches!(
            interval_div(&iv(int(0), int(1)), &iv(int(-1), int(1))),
            Err(Error::DivisorContainsZero(_))
        ));
        assert!(interval_div(&iv(int(0), int(1)), &iv(int(0), int(1))).is_err());
    }

    #[test]
    fn mid_rad_mod_entries() {
        let a = iv(int(1), int(3));
        assert_eq!((a.mid(), a.rad(), a.modulus()), (int(2), int(1), int(3)));
        let b = iv(int(-2), int(-2));
        assert_eq!((b.mid(), b.rad(), b.modulus()), (int(-2), int(0), int(2)));
        let c = iv(int(-1), int(5));
        assert_eq!((c.mid(), c.rad(), c.modulus()), (int(2), int(3), int(5)));
    }

    #[test]
    fn quad_membership() {
        let s2 = QuadExt::sqrt(2).unwrap();
        assert!(iv(int(1), rat(3, 2)).contains_quad(&s2));
        assert!(!iv(rat(3, 2), int(2)).contains_quad(&s2));
        assert!(iv(int(2), int(2)).contains_quad(&QuadExt::from_rational(int(2))));
    }

    #[test]
    fn text_form() {
        assert_eq!(parse_interval("-1/2:3").unwrap().to_string(), "-1/2:3");
        assert_eq!(parse_interval("[-1:1]").unwrap(), iv(int(-1), int(1)));
        assert_eq!(parse_interval("5").unwrap(), RatInterval::point(int(5)));
        assert!(parse_interval("2:1").is_err());
    }
}
