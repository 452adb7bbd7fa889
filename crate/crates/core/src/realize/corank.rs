//! Ranks `q-1` and `q-2` through column relations.
//!
//! The last one or two columns are combinations of the base columns. Rows
//! whose dependent entries are pinned either solve for a free base entry
//! (a pivot) or impose linear conditions on the coefficients.

use std::collections::BTreeSet;

use super::{certify, check_witness, pin_boundaries, rational_shortcut, require_tall, Branch, ColumnDepWitness, Mode, RealizationResult, Side};
use crate::error::{Error, Result};
use crate::linalg::approx::{precision_budget, round_from, solution_from};
use crate::linalg::{rank, solve, AffineSolution, LinearSystem, Matrix, Scalar};
use crate::number::{IntervalMatrix, QuadExt, RatInterval, Rational};

/// Rational matrix of rank at most `q-1` from a one-relation witness.
pub fn realize_rank_le_qm1(alpha: &IntervalMatrix, w: &ColumnDepWitness) -> Result<RealizationResult> {
    if w.dependent_columns() != 1 {
        return Err(Error::WitnessInvalid("expected a single column relation".into()));
    }
    Engine::new(alpha, w)?.run()
}

/// Rational matrix of rank at most `q-2` from a two-relation witness.
pub fn realize_rank_le_qm2(alpha: &IntervalMatrix, w: &ColumnDepWitness) -> Result<RealizationResult> {
    if w.dependent_columns() != 2 {
        return Err(Error::WitnessInvalid("expected two column relations".into()));
    }
    let first = Engine::new(alpha, w)?.run();
    let Err(err @ Error::ConstructionFailed(_)) = first else {
        return first;
    };
    // The coefficient systems are solved one side after the other, so the
    // mirrored order is worth a try.
    let q = alpha.cols();
    let mut order: Vec<usize> = (0..q).collect();
    order.swap(q - 2, q - 1);
    let swapped = ColumnDepWitness {
        matrix: w.matrix.permute_cols(&order),
        coeffs_b: w.coeffs_c.clone(),
        coeffs_c: w.coeffs_b.clone(),
    };
    match Engine::new(&alpha.permute_cols(&order), &swapped)?.run() {
        Ok(res) => certify(alpha, res.matrix.permute_cols(&order), q - 2, Mode::AtMost, res.branches),
        Err(_) => Err(err),
    }
}

/// Affine form in the `c` coefficients.
#[derive(Clone, Debug)]
struct Form {
    lin: Vec<Rational>,
    cst: Rational,
}

impl Form {
    fn zero(m: usize) -> Self {
        Form { lin: vec![Rational::zero(); m], cst: Rational::zero() }
    }

    fn constant(m: usize, v: Rational) -> Self {
        Form { cst: v, ..Form::zero(m) }
    }

    fn is_zero(&self) -> bool {
        self.cst.is_zero() && self.lin.iter().all(Scalar::is_zero)
    }

    fn eval<T: Scalar>(&self, c: &[T]) -> T {
        self.lin
            .iter()
            .zip(c)
            .filter(|(l, _)| !l.is_zero())
            .fold(T::from_rational(&self.cst), |acc, (l, x)| acc.add(&x.mul(&T::from_rational(l))))
    }
}

/// `Σ coef_l(c) b_l + cst(c) = 0`.
#[derive(Clone, Debug)]
struct Bilinear {
    coef: Vec<Form>,
    cst: Form,
}

/// How a row fixes its pinned dependent entries.
#[derive(Clone, Copy, Debug)]
enum Pivot {
    Single { side: usize, col: usize },
    Pair { cols: [usize; 2] },
    Shared { col: usize },
}

struct Engine {
    alpha: IntervalMatrix,
    h: Matrix<QuadExt>,
    /// Coefficients per side; the last side is `c`.
    coeffs: Vec<Vec<QuadExt>>,
    m: usize,
    pivots: Vec<Option<Pivot>>,
    c_eqs: Vec<(Vec<Rational>, Rational)>,
    b_eqs: Vec<Bilinear>,
    branches: BTreeSet<Branch>,
}

impl Engine {
    fn new(alpha: &IntervalMatrix, w: &ColumnDepWitness) -> Result<Self> {
        let (p, q) = alpha.shape();
        check_witness(alpha, &w.matrix)?;
        require_tall(alpha)?;
        if !w.relations_hold() {
            return Err(Error::WitnessInvalid("column relations do not hold for the witness".into()));
        }
        let k = w.dependent_columns();
        let m = q - k;
        let coeffs: Vec<Vec<QuadExt>> = match k {
            1 => vec![w.coeffs_c.clone()],
            _ => vec![w.coeffs_b.clone(), w.coeffs_c.clone()],
        };
        let alpha = pin_boundaries(alpha, &w.matrix);
        let mut e = Engine {
            alpha,
            h: w.matrix.clone(),
            coeffs,
            m,
            pivots: vec![None; p],
            c_eqs: Vec::new(),
            b_eqs: Vec::new(),
            branches: BTreeSet::new(),
        };
        e.classify();
        Ok(e)
    }

    fn sides(&self) -> usize {
        self.coeffs.len()
    }

    fn side_tag(&self, s: usize) -> Side {
        if s + 1 == self.sides() {
            Side::C
        } else {
            Side::B
        }
    }

    fn pinned(&self, i: usize, j: usize) -> Option<&Rational> {
        let iv = self.alpha.get(i, j);
        iv.is_degenerate().then(|| iv.lo())
    }

    fn unit_form(&self, l: usize, v: Rational) -> Form {
        let mut f = Form::zero(self.m);
        f.lin[l] = v;
        f
    }

    fn classify(&mut self) {
        let m = self.m;
        let p = self.alpha.rows();
        let ns = self.sides();
        for j in 0..m {
            if self.coeffs.iter().all(|g| g[j].is_zero()) {
                self.branches.insert(Branch::FreeColumn);
            }
        }
        for (l, c) in self.coeffs[ns - 1].clone().iter().enumerate() {
            if let Some(r) = c.to_rational() {
                let mut row = vec![Rational::zero(); m];
                row[l] = Rational::one();
                self.c_eqs.push((row, r));
            }
        }
        if ns == 2 {
            for (l, b) in self.coeffs[0].clone().iter().enumerate() {
                if let Some(r) = b.to_rational() {
                    let mut coef = vec![Form::zero(m); m];
                    coef[l] = Form::constant(m, Rational::one());
                    self.b_eqs.push(Bilinear { coef, cst: Form::constant(m, -r) });
                }
            }
        }
        for i in 0..p {
            let free: Vec<usize> = (0..m).filter(|&j| self.pinned(i, j).is_none()).collect();
            let targets: Vec<Option<Rational>> = (0..ns).map(|s| self.pinned(i, m + s).cloned()).collect();
            let pivotable: Vec<Vec<usize>> = (0..ns)
                .map(|s| free.iter().copied().filter(|&j| !self.coeffs[s][j].is_zero()).collect())
                .collect();
            let active: Vec<bool> = (0..ns).map(|s| targets[s].is_some()).collect();
            if active.iter().all(|a| !a) {
                self.branches.insert(Branch::NondegenerateRow);
                continue;
            }
            let system = |s: usize| active[s] && pivotable[s].is_empty();
            for s in 0..ns {
                if system(s) {
                    self.add_system_row(i, s, targets[s].clone().unwrap());
                }
            }
            let both = ns == 2 && active[0] && active[1];
            if !both {
                let s = (0..ns).find(|&s| active[s]).unwrap();
                if system(s) {
                    self.branches.insert(Branch::SystemRow { side: self.side_tag(s), free_entries: !free.is_empty() });
                } else {
                    self.branches.insert(Branch::PivotRow(self.side_tag(s)));
                    self.pivots[i] = Some(Pivot::Single { side: s, col: pivotable[s][0] });
                }
                continue;
            }
            match (system(0), system(1)) {
                (true, true) => {
                    self.branches.insert(Branch::DoubleSystemRow);
                }
                (false, true) => {
                    self.branches.insert(Branch::MixedRow(Side::B));
                    self.pivots[i] = Some(Pivot::Single { side: 0, col: pivotable[0][0] });
                }
                (true, false) => {
                    self.branches.insert(Branch::MixedRow(Side::C));
                    self.pivots[i] = Some(Pivot::Single { side: 1, col: pivotable[1][0] });
                }
                (false, false) => {
                    let (b, c) = (&self.coeffs[0], &self.coeffs[1]);
                    let pair = free.iter().enumerate().find_map(|(x, &j)| {
                        free[x + 1..]
                            .iter()
                            .find(|&&l| !(&b[j] * &c[l] - &b[l] * &c[j]).is_zero())
                            .map(|&l| [j, l])
                    });
                    let shared = free.iter().any(|&j| !b[j].is_zero() && !c[j].is_zero());
                    match pair {
                        Some(cols) => {
                            self.branches.insert(if shared {
                                Branch::SharedPivotRow { entry_solvable: true }
                            } else {
                                Branch::SplitPivotRow
                            });
                            self.pivots[i] = Some(Pivot::Pair { cols });
                        }
                        None => {
                            self.branches.insert(Branch::SharedPivotRow { entry_solvable: false });
                            self.pivots[i] = Some(Pivot::Shared { col: pivotable[1][0] });
                            let (vb, vc) = (targets[0].clone().unwrap(), targets[1].clone().unwrap());
                            self.add_shared_row(i, &free, vb, vc);
                        }
                    }
                }
            }
        }
    }

    /// `Σ_l γ_l h_il = v` over the pinned base entries of row `i`.
    fn add_system_row(&mut self, i: usize, s: usize, v: Rational) {
        let m = self.m;
        let pinned: Vec<(usize, Rational)> = (0..m).filter_map(|j| self.pinned(i, j).map(|r| (j, r.clone()))).collect();
        if s + 1 == self.sides() {
            let mut row = vec![Rational::zero(); m];
            for (j, r) in pinned {
                row[j] = r;
            }
            self.c_eqs.push((row, v));
        } else {
            let mut coef = vec![Form::zero(m); m];
            for (j, r) in pinned {
                coef[j] = Form::constant(m, r);
            }
            self.b_eqs.push(Bilinear { coef, cst: Form::constant(m, -v) });
        }
    }

    /// Both pinned equations of row `i` with proportional free parts.
    fn add_shared_row(&mut self, i: usize, free: &[usize], vb: Rational, vc: Rational) {
        let m = self.m;
        let pinned: Vec<(usize, Rational)> = (0..m).filter_map(|j| self.pinned(i, j).map(|r| (j, r.clone()))).collect();
        let mut new = Vec::new();
        for (x, &j) in free.iter().enumerate() {
            for &l in &free[x + 1..] {
                let mut coef = vec![Form::zero(m); m];
                coef[j] = self.unit_form(l, Rational::one());
                coef[l] = self.unit_form(j, -Rational::one());
                new.push(Bilinear { coef, cst: Form::zero(m) });
            }
            // r_c(c) b_j - c_j r_b(b) = 0
            let mut rc = Form::constant(m, vc.clone());
            let mut coef = vec![Form::zero(m); m];
            for (l, r) in &pinned {
                rc.lin[*l] = -r.clone();
                coef[*l] = self.unit_form(j, r.clone());
            }
            coef[j] = rc;
            new.push(Bilinear { coef, cst: self.unit_form(j, -vb.clone()) });
        }
        for eq in new {
            if let Some(lin) = self.c_only(&eq) {
                self.c_eqs.push(lin);
            }
            self.b_eqs.push(eq);
        }
    }

    /// An equation whose unknown-`b` terms vanish is linear in `c`.
    fn c_only(&self, eq: &Bilinear) -> Option<(Vec<Rational>, Rational)> {
        let b = &self.coeffs[0];
        let mut lin = eq.cst.lin.clone();
        let mut cst = eq.cst.cst.clone();
        for (l, f) in eq.coef.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            let r = b[l].to_rational()?;
            for (x, y) in lin.iter_mut().zip(&f.lin) {
                *x = &*x + &r * y;
            }
            cst = cst + &r * &f.cst;
        }
        Some((lin, -cst))
    }

    fn b_system<T: Scalar>(&self, c: &[T]) -> Result<LinearSystem<T>> {
        let eqs = self
            .b_eqs
            .iter()
            .map(|e| (e.coef.iter().map(|f| f.eval(c)).collect(), e.cst.eval(c).neg()))
            .collect();
        LinearSystem::from_equations(self.m, eqs)
    }

    fn run(&self) -> Result<RealizationResult> {
        let q = self.alpha.cols();
        let target = q - self.sides();
        if let Some(res) = rational_shortcut(&self.alpha, &self.h, target, Mode::AtMost) {
            return Ok(res);
        }
        let m = self.m;
        let c = &self.coeffs[self.sides() - 1];
        let broken = |what: &str| Error::ConstructionFailed(format!("witness violates the {what}"));
        let c_sys = LinearSystem::from_equations(m, self.c_eqs.clone())?;
        if !c_sys.map(|x| QuadExt::from_rational(x.clone())).is_solved_by(c) {
            return Err(broken("coefficient conditions"));
        }
        let c_sol = solve(&c_sys).feasible().ok_or_else(|| broken("coefficient conditions"))?;
        let b_ref = if self.sides() == 2 {
            let sys = self.b_system(c)?;
            if !sys.is_solved_by(&self.coeffs[0]) {
                return Err(broken("paired coefficient conditions"));
            }
            Some(rank(&sys.coeffs))
        } else {
            None
        };
        for level in 0..=precision_budget() {
            let Some(ct) = solution_from(&c_sol, c, &loose(c), level) else { break };
            let bt = match b_ref {
                Some(r) => match self.round_b(&ct, r, level)? {
                    Some(bt) => bt,
                    None => continue,
                },
                None => Vec::new(),
            };
            let Some(mat) = self.assemble(level, &bt, &ct) else { continue };
            if let Ok(res) = certify(&self.alpha, mat, target, Mode::AtMost, self.branches.clone()) {
                return Ok(res);
            }
        }
        Err(Error::ConstructionFailed("column-relation rounding did not converge within the precision budget".into()))
    }

    /// `b` near the witness solving the conditions at the rounded `c`.
    fn round_b(&self, ct: &[Rational], ref_rank: usize, level: u32) -> Result<Option<Vec<Rational>>> {
        let sys = self.b_system(ct)?;
        if rank(&sys.coeffs) != ref_rank {
            return Ok(None);
        }
        let Some(sol): Option<AffineSolution<Rational>> = solve(&sys).feasible() else {
            return Ok(None);
        };
        let b = &self.coeffs[0];
        Ok(solution_from(&sol, b, &loose(b), level))
    }

    fn assemble(&self, level: u32, bt: &[Rational], ct: &[Rational]) -> Option<Matrix<Rational>> {
        let (p, q) = self.alpha.shape();
        let m = self.m;
        let ns = self.sides();
        let gam: Vec<&[Rational]> = if ns == 2 { vec![bt, ct] } else { vec![ct] };
        let mut out = Matrix::zeros(p, q);
        for i in 0..p {
            let mut row: Vec<Rational> = Vec::with_capacity(m);
            for j in 0..m {
                let v = match self.pinned(i, j) {
                    Some(r) => r.clone(),
                    None => round_from(self.h.get(i, j), self.alpha.get(i, j), level)?,
                };
                row.push(v);
            }
            let dot = |s: usize, row: &[Rational], skip: &[usize]| -> Rational {
                (0..m).filter(|j| !skip.contains(j)).fold(Rational::zero(), |acc, j| acc + &gam[s][j] * &row[j])
            };
            let goal = |s: usize| self.pinned(i, m + s).cloned().unwrap_or_else(Rational::zero);
            match self.pivots[i] {
                Some(Pivot::Single { side, col }) => {
                    let g = &gam[side][col];
                    if g.is_zero() {
                        return None;
                    }
                    row[col] = (goal(side) - dot(side, &row, &[col])) / g;
                }
                Some(Pivot::Pair { cols: [j, l] }) => {
                    let det = &bt[j] * &ct[l] - &bt[l] * &ct[j];
                    if det.is_zero() {
                        return None;
                    }
                    let rb = goal(0) - dot(0, &row, &[j, l]);
                    let rc = goal(1) - dot(1, &row, &[j, l]);
                    row[j] = (&rb * &ct[l] - &rc * &bt[l]) / &det;
                    row[l] = (&rc * &bt[j] - &rb * &ct[j]) / &det;
                }
                Some(Pivot::Shared { col }) => {
                    if ct[col].is_zero() {
                        return None;
                    }
                    row[col] = (goal(1) - dot(1, &row, &[col])) / &ct[col];
                    if dot(0, &row, &[]) != goal(0) {
                        return None;
                    }
                }
                None => {}
            }
            for s in 0..ns {
                out.set(i, m + s, dot(s, &row, &[]));
            }
            for (j, v) in row.into_iter().enumerate() {
                out.set(i, j, v);
            }
        }
        Some(out)
    }
}

/// Generous box around a coefficient vector; coefficients are unconstrained.
fn loose(x: &[QuadExt]) -> Vec<RatInterval> {
    x.iter()
        .map(|v| {
            let (lo, hi) = v.enclosure(16);
            RatInterval::hull(lo - Rational::one(), hi + Rational::one())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{int, rat};

    fn q(x: i64) -> QuadExt {
        QuadExt::from_rational(int(x))
    }

    fn around(h: &Matrix<QuadExt>, rad: Rational) -> IntervalMatrix {
        h.map(|x| {
            let (lo, hi) = x.enclosure(8);
            RatInterval::new(lo - &rad, hi + &rad).unwrap()
        })
    }

    fn column_dep(base: Vec<Vec<QuadExt>>, coeffs_b: Vec<QuadExt>, coeffs_c: Vec<QuadExt>) -> ColumnDepWitness {
        let rows = base
            .into_iter()
            .map(|row| {
                let mut r = row.clone();
                for g in [&coeffs_b, &coeffs_c] {
                    if !g.is_empty() {
                        r.push(row.iter().zip(g.iter()).fold(QuadExt::zero(), |a, (x, y)| a + x * y));
                    }
                }
                r
            })
            .collect();
        ColumnDepWitness { matrix: Matrix::from_rows(rows).unwrap(), coeffs_b, coeffs_c }
    }

    #[test]
    fn one_relation_with_pinned_target() {
        let s = QuadExt::sqrt(2).unwrap();
        let w = column_dep(
            vec![vec![q(1), s.clone()], vec![s.clone(), q(1)], vec![q(2), q(3)]],
            vec![],
            vec![s.clone(), q(1)],
        );
        let mut alpha = around(&w.matrix, rat(1, 20));
        // Row 1 has the rational target √2·√2 + 1 = 3.
        let t = w.matrix.get(1, 2).clone();
        assert_eq!(t, &(&s * &s) + &q(1));
        alpha.set(1, 2, RatInterval::point(int(3)));
        let res = realize_rank_le_qm1(&alpha, &w).unwrap();
        assert!(rank(&res.matrix) <= 2);
        assert_eq!(res.matrix.get(1, 2), &int(3));
        assert!(res.branches.contains(&Branch::PivotRow(Side::C)));
    }

    #[test]
    fn two_relations_split_pivot() {
        let s = QuadExt::sqrt(2).unwrap();
        let w = column_dep(
            vec![vec![s.clone(), q(1)], vec![q(1), s.clone()], vec![q(1), q(1)], vec![s.clone(), s.clone()]],
            vec![s.clone(), q(0)],
            vec![q(0), s.clone()],
        );
        let mut alpha = around(&w.matrix, rat(1, 20));
        alpha.set(0, 2, RatInterval::point(int(2)));
        alpha.set(1, 3, RatInterval::point(int(2)));
        alpha.set(3, 2, RatInterval::point(int(2)));
        alpha.set(3, 3, RatInterval::point(int(2)));
        let res = realize_rank_le_qm2(&alpha, &w).unwrap();
        assert!(rank(&res.matrix) <= 2);
        assert!(res.branches.contains(&Branch::SplitPivotRow));
    }

    #[test]
    fn two_relations_shared_pivot() {
        let r = QuadExt::sqrt(3).unwrap();
        let one = q(1);
        let b = vec![&r - &one, q(1)];
        let c = vec![&r - &q(2), q(2)];
        let w = column_dep(
            vec![vec![r.clone(), &one + &r], vec![q(1), r.clone()], vec![r.clone(), q(2)], vec![q(2), q(1)]],
            b,
            c,
        );
        let mut alpha = around(&w.matrix, rat(1, 20));
        alpha.set(0, 2, RatInterval::point(int(4)));
        alpha.set(0, 3, RatInterval::point(int(5)));
        let res = realize_rank_le_qm2(&alpha, &w).unwrap();
        assert!(rank(&res.matrix) <= 2);
        assert_eq!(res.matrix.get(0, 2), &int(4));
        assert!(res.branches.contains(&Branch::SharedPivotRow { entry_solvable: true }));
    }

    #[test]
    fn two_relations_proportional_free_part() {
        let r = QuadExt::sqrt(2).unwrap();
        // On the free entries of row 0, c = √2 b.
        let w = column_dep(
            vec![
                vec![q(1), -&r, q(1)],
                vec![q(1), q(2), q(1)],
                vec![q(2), r.clone(), q(3)],
                vec![q(1), q(1), r.clone()],
                vec![q(3), q(1), q(2)],
            ],
            vec![r.clone(), q(1), q(1)],
            vec![q(2), r.clone(), q(1)],
        );
        assert_eq!(w.matrix.get(0, 3), &q(1));
        assert_eq!(w.matrix.get(0, 4), &q(1));
        let mut alpha = around(&w.matrix, rat(1, 20));
        for j in [2, 3, 4] {
            alpha.set(0, j, RatInterval::point(int(1)));
        }
        let res = realize_rank_le_qm2(&alpha, &w).unwrap();
        assert!(rank(&res.matrix) <= 3);
        assert!(res.branches.contains(&Branch::SharedPivotRow { entry_solvable: false }));
        for j in [2, 3, 4] {
            assert_eq!(res.matrix.get(0, j), &int(1));
        }
    }
}
