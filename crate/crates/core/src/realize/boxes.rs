//! Rational neighbourhoods of quadratic-field values.

use crate::linalg::approx::{rational_above, rational_below};
use crate::number::{QuadExt, RatInterval, Rational};

/// Open-style neighbourhood of radius at most `eps` with rational
/// endpoints, never degenerate.
pub fn nbhd(x: &QuadExt, eps: &Rational) -> RatInterval {
    match x.to_rational() {
        Some(r) => RatInterval::hull(&r - eps, &r + eps),
        None => RatInterval::hull(rational_below(x, eps), rational_above(x, eps)),
    }
}

/// Starting radius: a small fraction of the widths involved, at most 1.
pub fn initial_radius<'a>(intervals: impl Iterator<Item = &'a RatInterval>) -> Rational {
    let one = Rational::from_integer(1.into());
    intervals
        .filter(|iv| !iv.is_degenerate())
        .map(|iv| iv.width() / Rational::from_integer(4.into()))
        .fold(one, |m, w| if w < m { w } else { m })
}
