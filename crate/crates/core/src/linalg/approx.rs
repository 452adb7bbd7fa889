//! Rational approximation of quadratic irrationals and rational points of
//! affine solution sets near a real point.

use num_traits::{Signed, Zero};


use super::solve::{solve, AffineSolution, LinearSystem};
use crate::error::{Error, Result};
use crate::number::{QuadExt, RatInterval, Rational};
use crate::number::rational::pow2;

pub const PRECISION_ENV: &str = "INTERVAL_RANK_PRECISION_BUDGET";
pub const DEFAULT_BUDGET: u32 = 64;

/// Highest precision level tried before giving up. Level `n` allows
/// denominators up to `2^n`.
pub fn precision_budget() -> u32 {
    std::env::var(PRECISION_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<u32>().ok())
        .map(|v| v.clamp(1, 4096))
        .unwrap_or(DEFAULT_BUDGET)
}

/// Last continued-fraction convergent of `x` with denominator at most
/// `2^level`. Exact when `x` is rational with a small enough denominator.
pub fn best_convergent(x: &QuadExt, level: u32) -> Rational {
    let bound = pow2(level);
    let mut best = x.floor();
    for c in x.convergents() {
        let den = Rational::from_integer(c.denom().clone());
        if den > bound {
            break;
        }
        best = c;
    }
    best
}

/// A rational inside `iv`, as close to `x` as the first sufficient level
/// gives. `x` must lie in `iv`; for a non-degenerate `iv` with `x` on its
/// boundary only the boundary point itself is found when it is rational.
pub fn round_into(x: &QuadExt, iv: &RatInterval) -> Result<Rational> {
    if let Some(r) = x.to_rational() {
        if iv.contains(&r) {
            return Ok(r);
        }
        return Err(Error::BoxTooTight);
    }
    for level in 0..=precision_budget() {
        let c = best_convergent(x, level);
        if iv.contains(&c) {
            return Ok(c);
        }
    }
    Err(Error::BoxTooTight)
}

/// A rational strictly between `x - tol` and `x`.
pub fn rational_below(x: &QuadExt, tol: &Rational) -> Rational {
    approach(x, tol, false)
}

/// A rational strictly between `x` and `x + tol`.
pub fn rational_above(x: &QuadExt, tol: &Rational) -> Rational {
    approach(x, tol, true)
}

fn approach(x: &QuadExt, tol: &Rational, up: bool) -> Rational {
    debug_assert!(tol.is_positive());
    let h = tol / Rational::from_integer(2.into());
    let target = if up { x + &QuadExt::from_rational(h) } else { x - &QuadExt::from_rational(h) };
    let mut level = 0;
    loop {
        let c = best_convergent(&target, level);
        let d = &QuadExt::from_rational(c.clone()) - x;
        let inside = if up {
            d.signum().is_gt() && d.cmp_rational(tol).is_lt()
        } else {
            d.signum().is_lt() && d.cmp_rational(&-tol).is_gt()
        };
        if inside {
            return c;
        }
        level += 1;
    }
}

/// Positive rational `r` with `r <= x`, for `x > 0`.
pub fn positive_lower_bound(x: &QuadExt) -> Rational {
    debug_assert!(x.signum().is_gt());
    if let Some(r) = x.to_rational() {
        return r;
    }
    let mut bits = 8;
    loop {
        let (lo, _) = x.enclosure(bits);
        if lo.is_positive() {
            return lo;
        }
        bits *= 2;
    }
}

/// Rational solution of `sys` inside `bx`, near the real solution `point`.
///
/// Degenerate box components are added as equations, so they are hit
/// exactly. The free variables of the reduced system are rounded to
/// convergents of the matching coordinates of `point` at increasing
/// levels until the whole solution lands in `bx`.
pub fn rational_solution_near(
    sys: &LinearSystem<Rational>,
    point: &[QuadExt],
    bx: &[RatInterval],
) -> Result<Vec<Rational>> {
    let n = sys.vars();
    if point.len() != n || bx.len() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("{n} coordinates"),
            found: format!("point {} / box {}", point.len(), bx.len()),
        });
    }
    let mut eqs: Vec<(Vec<Rational>, Rational)> = (0..sys.coeffs.rows())
        .map(|i| (sys.coeffs.row(i).to_vec(), sys.rhs[i].clone()))
        .collect();
    for (i, iv) in bx.iter().enumerate() {
        if iv.is_degenerate() {
            let mut row = vec![Rational::zero(); n];
            row[i] = Rational::from_integer(1.into());
            eqs.push((row, iv.lo().clone()));
        }
    }
    let full = LinearSystem::from_equations(n, eqs)?;
    let sol = solve(&full).feasible().ok_or(Error::BoxTooTight)?;
    solution_from(&sol, point, bx, 0).ok_or(Error::BoxTooTight)
}

/// First level `>= start` at which the convergent of `x` lies in `iv`.
pub fn round_from(x: &QuadExt, iv: &RatInterval, start: u32) -> Option<Rational> {
    if let Some(r) = x.to_rational() {
        return iv.contains(&r).then_some(r);
    }
    (start..=precision_budget())
        .map(|level| best_convergent(x, level))
        .find(|c| iv.contains(c))
}

/// Like [`rational_solution_near`] on an already solved system, starting
/// the level schedule at `start`. Returns `None` when the schedule runs out.
pub fn solution_from(
    sol: &AffineSolution<Rational>,
    point: &[QuadExt],
    bx: &[RatInterval],
    start: u32,
) -> Option<Vec<Rational>> {
    for level in start..=precision_budget() {
        let free: Vec<Rational> = sol.free.iter().map(|&f| best_convergent(&point[f], level)).collect();
        let x = sol.with_free(&free);
        if x.iter().zip(bx).all(|(v, iv)| iv.contains(v)) {
            return Some(x);
        }
    }
    None
}

/// `|x - y| < tol` with `x` real and `y` rational.
pub fn within(x: &QuadExt, y: &Rational, tol: &Rational) -> bool {
    let d = (x - &QuadExt::from_rational(y.clone())).abs();
    d.cmp_rational(tol).is_lt()
}
