//! Elements `a + b*sqrt(d)` of a real quadratic field.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::{floor_rat, format_rational, isqrt, parse_rational, pow2, Rational};
use crate::error::{Error, Result};

/// `rat + irr * sqrt(radicand)`.
///
/// Rational values always carry radicand `0`, so equality is structural and
/// a rational can be combined with an element of any field. Irrational values
/// carry a square-free radicand `d >= 2`; combining two irrational values with
/// different radicands is an error (the checked operations return
/// [`Error::MixedRadicand`], the operator forms panic).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExt {
    rat: Rational,
    irr: Rational,
    radicand: u64,
}

pub fn is_square_free(d: u64) -> bool {
    if d < 2 {
        return false;
    }
    let mut n = d;
    let mut p = 2u64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        if n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

impl QuadExt {
    pub fn new(rat: Rational, irr: Rational, radicand: u64) -> Result<Self> {
        if irr.is_zero() {
            return Ok(Self::from_rational(rat));
        }
        if !is_square_free(radicand) {
            return Err(Error::InvalidRadicand(radicand));
        }
        Ok(QuadExt { rat, irr, radicand })
    }

    pub fn from_rational(r: Rational) -> Self {
        QuadExt {
            rat: r,
            irr: Rational::zero(),
            radicand: 0,
        }
    }

    /// `sqrt(d)` itself.
    pub fn sqrt(d: u64) -> Result<Self> {
        Self::new(Rational::zero(), Rational::one(), d)
    }

    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn rat_part(&self) -> &Rational {
        &self.rat
    }

    pub fn irr_part(&self) -> &Rational {
        &self.irr
    }

    /// Radicand of the field, `0` for rational values.
    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn is_rational(&self) -> bool {
        self.irr.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.rat.clone())
    }

    fn merge(&self, other: &Self) -> Result<u64> {
        match (self.radicand, other.radicand) {
            (0, d) | (d, 0) => Ok(d),
            (a, b) if a == b => Ok(a),
            (a, b) => Err(Error::MixedRadicand(a, b)),
        }
    }

    fn build(rat: Rational, irr: Rational, radicand: u64) -> Self {
        if irr.is_zero() {
            Self::from_rational(rat)
        } else {
            QuadExt { rat, irr, radicand }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let d = self.merge(other)?;
        Ok(Self::build(&self.rat + &other.rat, &self.irr + &other.irr, d))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        let d = self.merge(other)?;
        Ok(Self::build(&self.rat - &other.rat, &self.irr - &other.irr, d))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let d = self.merge(other)?;
        let dd = Rational::from_integer(BigInt::from(d));
        let rat = &self.rat * &other.rat + &self.irr * &other.irr * dd;
        let irr = &self.rat * &other.irr + &self.irr * &other.rat;
        Ok(Self::build(rat, irr, d))
    }

    /// Field norm `a^2 - d b^2`; nonzero for nonzero elements.
    pub fn norm(&self) -> Rational {
        let dd = Rational::from_integer(BigInt::from(self.radicand));
        &self.rat * &self.rat - &self.irr * &self.irr * dd
    }

    pub fn conjugate(&self) -> Self {
        Self::build(self.rat.clone(), -self.irr.clone(), self.radicand)
    }

    pub fn checked_inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let c = self.conjugate();
        Some(Self::build(&c.rat / &n, &c.irr / &n, self.radicand))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        let inv = other
            .checked_inv()
            .ok_or_else(|| Error::ConstructionFailed("division by zero".into()))?;
        self.checked_mul(&inv)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::build(&self.rat * r, &self.irr * r, self.radicand)
    }

    /// Exact sign, decided by comparing squares.
    pub fn signum(&self) -> Ordering {
        let sa = self.rat.cmp(&Rational::zero());
        let sb = self.irr.cmp(&Rational::zero());
        match (sa, sb) {
            (s, Ordering::Equal) => s,
            (Ordering::Equal, s) => s,
            (a, b) if a == b => a,
            (a, _) => {
                // rat and irr*sqrt(d) have opposite signs: the larger square wins.
                let dd = Rational::from_integer(BigInt::from(self.radicand));
                let lhs = &self.rat * &self.rat;
                let rhs = &self.irr * &self.irr * dd;
                match lhs.cmp(&rhs) {
                    Ordering::Greater => a,
                    Ordering::Less => a.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        Self::build(&self.rat - r, self.irr.clone(), self.radicand).signum()
    }

    /// Lower and upper rational bounds `lo <= self <= hi` with
    /// `hi - lo <= |irr| * 2^-bits`; both strict when `self` is irrational.
    pub fn enclosure(&self, bits: u32) -> (Rational, Rational) {
        if self.is_rational() {
            return (self.rat.clone(), self.rat.clone());
        }
        let scale = BigInt::one() << (2 * bits);
        let s = isqrt(&(BigInt::from(self.radicand) * scale));
        let den = pow2(bits);
        let root_lo = Rational::from_integer(s.clone()) / &den;
        let root_hi = Rational::from_integer(s + 1) / &den;
        let a = &self.rat + &self.irr * &root_lo;
        let b = &self.rat + &self.irr * &root_hi;
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// Exact floor.
    pub fn floor(&self) -> Rational {
        if self.is_rational() {
            return floor_rat(&self.rat);
        }
        let mut bits = 8;
        loop {
            let (lo, hi) = self.enclosure(bits);
            let f = floor_rat(&lo);
            if f == floor_rat(&hi) {
                return f;
            }
            bits *= 2;
        }
    }

    /// Continued-fraction convergents `p_k / q_k`, with strictly increasing
    /// denominators after the first. Finite for rational values.
    pub fn convergents(&self) -> Convergents {
        Convergents {
            x: Some(self.clone()),
            p: (BigInt::one(), BigInt::zero()),
            q: (BigInt::zero(), BigInt::one()),
        }
    }

    /// Floating-point approximation, for diagnostics only.
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        let a = self.rat.to_f64().unwrap_or(f64::NAN);
        let b = self.irr.to_f64().unwrap_or(f64::NAN);
        a + b * (self.radicand as f64).sqrt()
    }
}

pub struct Convergents {
    x: Option<QuadExt>,
    p: (BigInt, BigInt),
    q: (BigInt, BigInt),
}

impl Iterator for Convergents {
    type Item = Rational;

    fn next(&mut self) -> Option<Rational> {
        let x = self.x.take()?;
        let a = x.floor();
        let ai = a.numer().clone();
        let p = &ai * &self.p.0 + &self.p.1;
        let q = &ai * &self.q.0 + &self.q.1;
        let prev_p = std::mem::replace(&mut self.p.0, p.clone());
        self.p.1 = prev_p;
        let prev_q = std::mem::replace(&mut self.q.0, q.clone());
        self.q.1 = prev_q;
        let frac = &x - &QuadExt::from_rational(a);
        if !frac.is_zero() {
            self.x = frac.checked_inv();
        }
        Some(Rational::new(p, q))
    }
}

impl From<Rational> for QuadExt {
    fn from(r: Rational) -> Self {
        QuadExt::from_rational(r)
    }
}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.checked_sub(other).ok().map(|d| d.signum())
    }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&QuadExt> for &QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: &QuadExt) -> QuadExt {
                self.$checked(rhs).expect("quadratic field operation")
            }
        }
        impl $tr<QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                (&self).$checked(&rhs).expect("quadratic field operation")
            }
        }
        impl $tr<&QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: &QuadExt) -> QuadExt {
                (&self).$checked(rhs).expect("quadratic field operation")
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);
forward_op!(Div, div, checked_div);

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt::build(-self.rat, -self.irr, self.radicand)
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        -self.clone()
    }
}

impl fmt::Display for QuadExt {
    /// `a` for rationals, otherwise `a+b*sqrt(d)` / `a-b*sqrt(d)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", format_rational(&self.rat));
        }
        let sign = if self.irr.is_negative() { '-' } else { '+' };
        write!(
            f,
            "{}{}{}*sqrt({})",
            format_rational(&self.rat),
            sign,
            format_rational(&self.irr.abs()),
            self.radicand
        )
    }
}

/// Parses the [`Display`](fmt::Display) form; also accepts `a+-b*sqrt(d)`.
pub fn parse_quad(s: &str) -> Result<QuadExt> {
    let s = s.trim();
    let bad = |message: String| Error::Parse {
        line: 0,
        column: 0,
        message,
    };
    let Some(head) = s.strip_suffix(')') else {
        return Ok(QuadExt::from_rational(parse_rational(s)?));
    };
    let (head, d) = head
        .rsplit_once("*sqrt(")
        .ok_or_else(|| bad(format!("invalid quadratic token `{s}`")))?;
    let d: u64 = d
        .parse()
        .map_err(|_| bad(format!("invalid radicand in `{s}`")))?;
    let split = head
        .char_indices()
        .skip(1)
        .find(|&(_, c)| c == '+' || c == '-')
        .map(|(i, _)| i)
        .ok_or_else(|| bad(format!("missing sign between parts in `{s}`")))?;
    let rat = parse_rational(&head[..split])?;
    let mut irr = parse_rational(&head[split + 1..])?;
    if head.as_bytes()[split] == b'-' {
        irr = -irr;
    }
    QuadExt::new(rat, irr, d).map_err(|e| bad(e.to_string()))
}
