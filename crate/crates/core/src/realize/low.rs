//! Ranks zero and one.

use std::collections::BTreeSet;

use num_traits::Zero;

use super::boxes::{initial_radius, nbhd};
use super::{certify, check_witness, pin_boundaries, rational_shortcut, Branch, Mode, Rank2Witness, RealizationResult};
use crate::error::{Error, Result};
use crate::linalg::approx::{precision_budget, round_from, solution_from};
use crate::linalg::{rank, solve, LinearSystem, Matrix};
use crate::number::{IntervalMatrix, RatInterval, Rational};

/// The zero matrix, when every entry admits zero.
pub fn realize_rank0(alpha: &IntervalMatrix) -> Result<RealizationResult> {
    if let Some((i, j, iv)) = alpha.entries().find(|(_, _, iv)| !iv.contains_zero()) {
        return Err(Error::NoWitness(format!("entry ({}, {}) = {iv} excludes zero", i + 1, j + 1)));
    }
    let z = Matrix::zeros(alpha.rows(), alpha.cols());
    certify(alpha, z, 0, Mode::Exact, BTreeSet::from([Branch::ZeroMatrix]))
}

/// Rational rank-one matrix from a dyad witness `a c^T`.
///
/// `c` is rounded on the linear space cut out by the ratios of pinned
/// entries sharing a row; each pinned row then fixes its `a_i` by one
/// quotient.
pub fn realize_rank1(alpha: &IntervalMatrix, w: &Rank2Witness) -> Result<RealizationResult> {
    if w.b.iter().chain(&w.d).any(|x| !x.is_zero()) {
        return Err(Error::WitnessInvalid("rank-one witness must have b = 0 and d = 0".into()));
    }
    if w.a.len() != alpha.rows() || w.c.len() != alpha.cols() {
        return Err(Error::WitnessInvalid("witness vectors do not match the interval matrix".into()));
    }
    let r = w.matrix();
    check_witness(alpha, &r)?;
    if rank(&r) != 1 {
        return Err(Error::WitnessInvalid(format!("witness has rank {}, expected 1", rank(&r))));
    }
    if let Some(res) = rational_shortcut(alpha, &r, 1, Mode::Exact) {
        return Ok(res);
    }
    let alpha = pin_boundaries(alpha, &r);
    let (p, q) = alpha.shape();
    let pinned = |i: usize| -> Vec<usize> { (0..q).filter(|&j| alpha.get(i, j).is_degenerate()).collect() };

    let mut eps = initial_radius(alpha.entries().map(|(_, _, iv)| iv));
    let budget = precision_budget();
    let mut tries = 0;
    let (abox, cbox) = loop {
        let abox: Vec<RatInterval> = w.a.iter().map(|x| nbhd(x, &eps)).collect();
        let cbox: Vec<RatInterval> = w.c.iter().map(|x| nbhd(x, &eps)).collect();
        let ok = alpha
            .entries()
            .filter(|(_, _, iv)| !iv.is_degenerate())
            .all(|(i, j, iv)| abox[i].mul(&cbox[j]).is_subset_of(iv));
        if ok {
            break (abox, cbox);
        }
        tries += 1;
        if tries > 4 * budget {
            return Err(Error::ConstructionFailed("no neighbourhood radius found".into()));
        }
        eps = eps / Rational::from_integer(2.into());
    };

    let mut eqs = Vec::new();
    let unit = |j: usize| -> Vec<Rational> {
        let mut v = vec![Rational::zero(); q];
        v[j] = Rational::from_integer(1.into());
        v
    };
    for (j, cj) in w.c.iter().enumerate() {
        if let Some(r) = cj.to_rational() {
            eqs.push((unit(j), r));
        }
    }
    for i in 0..p {
        let t = pinned(i);
        for (x, &j) in t.iter().enumerate() {
            for &h in &t[x + 1..] {
                let mut row = vec![Rational::zero(); q];
                row[j] = alpha.get(i, h).lo().clone();
                row[h] = -alpha.get(i, j).lo().clone();
                eqs.push((row, Rational::zero()));
            }
        }
    }
    let sys = LinearSystem::from_equations(q, eqs)?;
    let sol = solve(&sys)
        .feasible()
        .ok_or_else(|| Error::ConstructionFailed("pinned ratios inconsistent with the witness".into()))?;

    for start in 0..=budget {
        let Some(ct) = solution_from(&sol, &w.c, &cbox, start) else { break };
        if ct.iter().zip(&w.c).any(|(t, c)| t.is_zero() != c.is_zero()) {
            continue;
        }
        let mut branches = BTreeSet::new();
        let mut at = Vec::with_capacity(p);
        let mut ok = true;
        for i in 0..p {
            let t = pinned(i);
            let lead = t.iter().copied().find(|&j| !w.c[j].is_zero());
            let v = match (t.is_empty(), lead) {
                (false, Some(j)) => {
                    branches.insert(Branch::DyadPinRow);
                    Some(alpha.get(i, j).lo() / &ct[j])
                }
                (false, None) => {
                    branches.insert(Branch::DyadZeroRow);
                    round_from(&w.a[i], &abox[i], start)
                }
                (true, _) => round_from(&w.a[i], &abox[i], start),
            };
            match v {
                Some(v) if abox[i].contains(&v) => at.push(v),
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let m = Matrix::from_fn(p, q, |i, j| &at[i] * &ct[j]);
        if let Ok(res) = certify(&alpha, m, 1, Mode::Exact, branches) {
            return Ok(res);
        }
    }
    Err(Error::ConstructionFailed("rank-one rounding did not converge within the precision budget".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{int, rat, QuadExt};

    fn iv(lo: Rational, hi: Rational) -> RatInterval {
        RatInterval::new(lo, hi).unwrap()
    }

    #[test]
    fn zero_matrix() {
        let a = Matrix::from_fn(2, 2, |_, _| iv(int(-1), int(1)));
        assert!(realize_rank0(&a).unwrap().matrix.is_zero());
        let mut b = a.clone();
        b.set(0, 1, iv(int(1), int(2)));
        assert!(matches!(realize_rank0(&b), Err(Error::NoWitness(_))));
        let z = Matrix::from_fn(2, 3, |_, _| RatInterval::point(int(0)));
        assert!(realize_rank0(&z).unwrap().matrix.is_zero());
    }

    #[test]
    fn irrational_dyad() {
        let s = QuadExt::sqrt(2).unwrap();
        let one = QuadExt::one();
        let w = Rank2Witness::dyad(vec![one.clone(), s.clone()], vec![s, one]);
        let r = w.matrix();
        let alpha = r.map(|x| {
            let (lo, hi) = x.enclosure(4);
            iv(lo - rat(1, 10), hi + rat(1, 10))
        });
        let res = realize_rank1(&alpha, &w).unwrap();
        assert_eq!(rank(&res.matrix), 1);
        assert!(alpha.contains(&res.matrix).unwrap());
    }
}
