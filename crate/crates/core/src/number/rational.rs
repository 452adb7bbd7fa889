//! Arbitrary-precision rationals and their text form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact fraction in canonical form (positive denominator, reduced).
pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn half() -> Rational {
    rat(1, 2)
}

pub fn pow2(exp: u32) -> Rational {
    Rational::from_integer(BigInt::one() << exp)
}

pub fn min_rat(a: &Rational, b: &Rational) -> Rational {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn max_rat(a: &Rational, b: &Rational) -> Rational {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// Serializes as `n/d`, or `n` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `n` or `n/d`. Only the canonical form is accepted back by the
/// round-trip contract, but non-reduced input such as `2/4` is normalized.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = |message: String| Error::Parse {
        line: 0,
        column: 0,
        message,
    };
    let s = s.trim();
    if s.is_empty() {
        return Err(bad("empty rational".into()));
    }
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let parse_int = |t: &str| -> Result<BigInt> {
        let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad(format!("invalid integer `{t}`")));
        }
        t.parse::<BigInt>()
            .map_err(|e| bad(format!("invalid integer `{t}`: {e}")))
    };
    let numer = parse_int(n)?;
    let denom = match d {
        Some(d) => {
            if d.starts_with(['-', '+']) {
                return Err(bad(format!("signed denominator in `{s}`")));
            }
            parse_int(d)?
        }
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(bad(format!("zero denominator in `{s}`")));
    }
    Ok(Rational::new(numer, denom))
}

/// Smallest power-of-two exponent `k` with `2^-k <= x`, for positive `x`.
pub fn log2_floor_inv(x: &Rational) -> u32 {
    debug_assert!(x.is_positive());
    let mut k = 0u32;
    let mut p = Rational::one();
    while &p > x {
        p /= int(2);
        k += 1;
    }
    k
}

/// Floor of a rational as an integer-valued rational.
pub fn floor_rat(x: &Rational) -> Rational {
    Rational::from_integer(x.numer().div_floor(x.denom()))
}

/// Largest integer `s` with `s^2 <= n` for non-negative `n`.
pub fn isqrt(n: &BigInt) -> BigInt {
    num_integer::Roots::sqrt(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_and_parses() {
        assert_eq!(format_rational(&rat(3, 1)), "3");
        assert_eq!(format_rational(&rat(-6, 4)), "-3/2");
        assert_eq!(parse_rational("-3/2").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("2/4").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("+7").unwrap(), int(7));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "1/0", "a", "1/-2", "1.5", "--1", "1/"] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }

    #[test]
    fn floor_of_negative() {
        assert_eq!(floor_rat(&rat(-1, 2)), int(-1));
        assert_eq!(floor_rat(&rat(7, 2)), int(3));
    }

    #[test]
    fn log2_bound() {
        assert_eq!(log2_floor_inv(&rat(1, 10)), 4);
        assert_eq!(log2_floor_inv(&int(3)), 0);
    }
}
