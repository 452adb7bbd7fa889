//! Exact scalars: rationals, quadratic-field elements and rational intervals.

pub mod imatrix;
pub mod interval;
pub mod quad;
pub mod rational;

pub use imatrix::{IntervalMatrix, Member};
pub use interval::{interval_add, interval_div, interval_mul, parse_interval, RatInterval};
pub use quad::{is_square_free, parse_quad, QuadExt};
pub use rational::{format_rational, int, parse_rational, rat, Rational};
