//! Exact feasibility of rational linear inequality systems by
//! Fourier-Motzkin elimination.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::number::Rational;

/// `coeffs · x <= rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Inequality {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl Inequality {
    pub fn le(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Inequality { coeffs, rhs }
    }

    pub fn ge(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Inequality {
            coeffs: coeffs.into_iter().map(|c| -c).collect(),
            rhs: -rhs,
        }
    }

    /// The two inequalities of `coeffs · x = rhs`.
    pub fn eq(coeffs: Vec<Rational>, rhs: Rational) -> [Self; 2] {
        [Self::le(coeffs.clone(), rhs.clone()), Self::ge(coeffs, rhs)]
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        let lhs: Rational = self.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
        lhs <= self.rhs
    }

    /// Scales so the last nonzero coefficient is ±1; keeps the direction.
    fn normalized(mut self) -> Self {
        if let Some(c) = self.coeffs.iter().rev().find(|c| !c.is_zero()).cloned() {
            let s = c.abs();
            for a in &mut self.coeffs {
                *a = &*a / &s;
            }
            self.rhs = &self.rhs / &s;
        }
        self
    }
}

/// Inequality together with the indices of the input rows it combines.
type Tracked = (Inequality, BTreeSet<usize>);

/// A rational point satisfying every inequality, or `None`.
///
/// Derived rows combining more than `s + 1` input rows after `s`
/// eliminations are implied by the others and dropped (Chernikov's rule).
pub fn lp_feasible(vars: usize, system: &[Inequality]) -> Option<Vec<Rational>> {
    let mut stages: Vec<Vec<Inequality>> = Vec::with_capacity(vars + 1);
    let mut current = dedup(system.iter().cloned().enumerate().map(|(i, q)| (q, BTreeSet::from([i]))), usize::MAX);
    for (eliminated, k) in (0..vars).rev().enumerate() {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for t in &current {
            let c = &t.0.coeffs[k];
            if c.is_positive() {
                pos.push(t);
            } else if c.is_negative() {
                neg.push(t);
            } else {
                rest.push(t.clone());
            }
        }
        for (p, hp) in &pos {
            for (n, hn) in &neg {
                let history: BTreeSet<usize> = hp.union(hn).copied().collect();
                if history.len() > eliminated + 2 {
                    continue;
                }
                let (cp, cn) = (p.coeffs[k].clone(), -n.coeffs[k].clone());
                let coeffs = p
                    .coeffs
                    .iter()
                    .zip(&n.coeffs)
                    .map(|(a, b)| a * &cn + b * &cp)
                    .collect();
                rest.push((Inequality::le(coeffs, &p.rhs * &cn + &n.rhs * &cp), history));
            }
        }
        let mut stage: Vec<Inequality> = current.into_iter().map(|t| t.0).collect();
        stage.dedup();
        stages.push(stage);
        current = dedup(rest.into_iter(), eliminated + 2);
    }
    let current: Vec<Inequality> = current.into_iter().map(|t| t.0).collect();
    if current.iter().any(|i| i.rhs.is_negative()) {
        return None;
    }
    let mut x = vec![Rational::zero(); vars];
    for k in 0..vars {
        let stage = &stages[vars - 1 - k];
        let mut lower: Option<Rational> = None;
        let mut upper: Option<Rational> = None;
        for ineq in stage {
            let c = &ineq.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let rest: Rational = (0..k).map(|j| &ineq.coeffs[j] * &x[j]).sum();
            let bound = (&ineq.rhs - rest) / c;
            if c.is_positive() {
                upper = Some(match upper {
                    Some(u) if u <= bound => u,
                    _ => bound,
                });
            } else {
                lower = Some(match lower {
                    Some(l) if l >= bound => l,
                    _ => bound,
                });
            }
        }
        x[k] = match (lower, upper) {
            (Some(l), _) => l,
            (None, Some(u)) => u,
            (None, None) => Rational::zero(),
        };
    }
    debug_assert!(system.iter().all(|i| i.holds(&x)));
    Some(x)
}

/// Normalizes and removes trivial rows. A row keeps every history that
/// is not a superset of another of its histories.
fn dedup(it: impl Iterator<Item = Tracked>, max_history: usize) -> Vec<Tracked> {
    let mut map: BTreeMap<Inequality, Vec<BTreeSet<usize>>> = BTreeMap::new();
    for (ineq, h) in it {
        if (ineq.coeffs.iter().all(|c| c.is_zero()) && !ineq.rhs.is_negative()) || h.len() > max_history {
            continue;
        }
        let hs = map.entry(ineq.normalized()).or_default();
        if hs.iter().any(|old| old.is_subset(&h)) {
            continue;
        }
        hs.retain(|old| !h.is_subset(old));
        hs.push(h);
    }
    map.into_iter().flat_map(|(ineq, hs)| hs.into_iter().map(move |h| (ineq.clone(), h))).collect()
}

pub fn unit(vars: usize, k: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); vars];
    v[k] = Rational::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{int, rat};

    #[test]
    fn contradictory_bounds() {
        let sys = [Inequality::ge(vec![int(1)], int(1)), Inequality::le(vec![int(1)], int(0))];
        assert!(lp_feasible(1, &sys).is_none());
    }

    #[test]
    fn simplex_point() {
        let mut sys = vec![
            Inequality::ge(unit(2, 0), int(0)),
            Inequality::ge(unit(2, 1), int(0)),
        ];
        sys.extend(Inequality::eq(vec![int(1), int(1)], int(1)));
        let x = lp_feasible(2, &sys).unwrap();
        assert!(sys.iter().all(|i| i.holds(&x)));
    }

    #[test]
    fn bounded_segment() {
        let sys = [Inequality::ge(vec![int(1)], int(1)), Inequality::le(vec![int(2)], int(3))];
        let x = lp_feasible(1, &sys).unwrap();
        assert!(x[0] >= int(1) && x[0] <= rat(3, 2));
    }
}
