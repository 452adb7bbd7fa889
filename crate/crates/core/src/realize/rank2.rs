//! Rank two from a decomposition `r_ij = a_i c_j + b_i d_j`.

use std::collections::BTreeSet;

use super::boxes::{initial_radius, nbhd};
use super::{certify, check_witness, pin_boundaries, rational_shortcut, require_tall, Branch, Mode, Rank2Witness, RealizationResult};
use crate::error::{Error, Result};
use crate::linalg::approx::{best_convergent, precision_budget, round_from, solution_from};
use crate::linalg::elim::independent_rows;
use crate::linalg::kernel::{minor_vector, subsets};
use crate::linalg::{rank, solve, LinearSystem, Matrix, Scalar};
use crate::number::{IntervalMatrix, QuadExt, RatInterval, Rational};

/// Rational rank-two matrix inside `alpha`.
pub fn realize_rank2(alpha: &IntervalMatrix, w: &Rank2Witness) -> Result<RealizationResult> {
    let (p, q) = alpha.shape();
    if w.a.len() != p || w.b.len() != p || w.c.len() != q || w.d.len() != q {
        return Err(Error::WitnessInvalid("witness vectors do not match the interval matrix".into()));
    }
    let r = w.matrix();
    check_witness(alpha, &r)?;
    require_tall(alpha)?;
    if rank(&r) != 2 {
        return Err(Error::WitnessInvalid(format!("witness has rank {}, expected 2", rank(&r))));
    }
    if let Some(res) = rational_shortcut(alpha, &r, 2, Mode::Exact) {
        return Ok(res);
    }
    // Columns with c_j = d_j = 0 are exactly zero; drop them and put them
    // back afterwards.
    let keep: Vec<usize> = (0..q).filter(|&j| !(w.c[j].is_zero() && w.d[j].is_zero())).collect();
    if keep.len() == q {
        return Rank2::new(alpha, w)?.run();
    }
    let rows: Vec<usize> = (0..p).collect();
    let sub_alpha = alpha.submatrix(&keep, &rows)?;
    let sub_w = Rank2Witness {
        a: w.a.clone(),
        b: w.b.clone(),
        c: keep.iter().map(|&j| w.c[j].clone()).collect(),
        d: keep.iter().map(|&j| w.d[j].clone()).collect(),
    };
    let inner = Rank2::new(&sub_alpha, &sub_w)?.run()?;
    let mut m = Matrix::zeros(p, q);
    for (k, &j) in keep.iter().enumerate() {
        for i in 0..p {
            m.set(i, j, inner.matrix.get(i, k).clone());
        }
    }
    certify(alpha, m, 2, Mode::Exact, inner.branches)
}

/// One row of the homogeneous system in the unknowns `δ_j`.
#[derive(Clone, Copy, Debug)]
enum GRow {
    /// Consistency of three pinned entries `(i,j), (i,h), (i,k)`.
    Cubic { i: usize, j: usize, h: usize, k: usize },
    /// Ratio of two pinned entries in columns with `c_h = c_k = 0`.
    Linear { i: usize, h: usize, k: usize },
}

struct Rank2<'a> {
    alpha: IntervalMatrix,
    w: &'a Rank2Witness,
    t_rows: Vec<Vec<usize>>,
    t2: Vec<usize>,
    pos: Vec<Option<usize>>,
    grows: Vec<GRow>,
}

impl<'a> Rank2<'a> {
    fn new(alpha: &IntervalMatrix, w: &'a Rank2Witness) -> Result<Self> {
        let alpha = pin_boundaries(alpha, &w.matrix());
        let (p, q) = alpha.shape();
        let t_rows: Vec<Vec<usize>> = (0..p).map(|i| (0..q).filter(|&j| alpha.get(i, j).is_degenerate()).collect()).collect();
        let t2: Vec<usize> = (0..q).filter(|&j| t_rows.iter().any(|t| t.contains(&j))).collect();
        let mut pos = vec![None; q];
        for (k, &j) in t2.iter().enumerate() {
            pos[j] = Some(k);
        }
        let mut grows = Vec::new();
        for (i, t) in t_rows.iter().enumerate() {
            for &j in t {
                let others: Vec<usize> = t.iter().copied().filter(|&x| x != j).collect();
                for (x, &h) in others.iter().enumerate() {
                    for &k in &others[x + 1..] {
                        grows.push(GRow::Cubic { i, j, h, k });
                    }
                }
            }
            for (x, &h) in t.iter().enumerate() {
                for &k in &t[x + 1..] {
                    if w.c[h].is_zero() && w.c[k].is_zero() {
                        grows.push(GRow::Linear { i, h, k });
                    }
                }
            }
        }
        Ok(Rank2 { alpha, w, t_rows, t2, pos, grows })
    }

    fn val(&self, i: usize, j: usize) -> &Rational {
        self.alpha.get(i, j).lo()
    }

    /// The system matrix evaluated at `gamma` (indexed by all columns).
    fn g_matrix<T: Scalar>(&self, gamma: &[T]) -> Matrix<T> {
        let t2 = self.t2.len();
        let mut rows = Vec::with_capacity(self.grows.len());
        for g in &self.grows {
            let mut row = vec![T::zero(); t2];
            match *g {
                GRow::Cubic { i, j, h, k } => {
                    let al = |x: usize| T::from_rational(self.val(i, x));
                    let (gj, gh, gk) = (&gamma[j], &gamma[h], &gamma[k]);
                    let u = gj.mul(&al(h)).sub(&gh.mul(&al(j)));
                    let v = gj.mul(&al(k)).sub(&gk.mul(&al(j)));
                    row[self.pos[k].unwrap()] = gj.mul(&u);
                    row[self.pos[h].unwrap()] = gj.mul(&v).neg();
                    row[self.pos[j].unwrap()] = gh.mul(&v).sub(&gk.mul(&u));
                }
                GRow::Linear { i, h, k } => {
                    row[self.pos[k].unwrap()] = T::from_rational(self.val(i, h));
                    row[self.pos[h].unwrap()] = T::from_rational(self.val(i, k)).neg();
                }
            }
            rows.push(row);
        }
        Matrix::from_vec(rows.len(), t2, rows.into_iter().flatten().collect()).expect("consistent shape")
    }

    fn run(&self) -> Result<RealizationResult> {
        let w = self.w;
        let (p, q) = self.alpha.shape();
        let budget = precision_budget();

        // Neighbourhoods with A_i C_j + B_i D_j inside every free entry.
        let mut eps = initial_radius(self.alpha.entries().map(|(_, _, iv)| iv));
        let mut tries = 0;
        let boxes = loop {
            let mk = |v: &[QuadExt]| -> Vec<RatInterval> { v.iter().map(|x| nbhd(x, &eps)).collect() };
            let (ab, bb, cb, db) = (mk(&w.a), mk(&w.b), mk(&w.c), mk(&w.d));
            let ok = self
                .alpha
                .entries()
                .filter(|(_, _, iv)| !iv.is_degenerate())
                .all(|(i, j, iv)| ab[i].mul(&cb[j]).add(&bb[i].mul(&db[j])).is_subset_of(iv));
            if ok {
                break (ab, bb, cb, db);
            }
            tries += 1;
            if tries > 4 * budget {
                return Err(Error::ConstructionFailed("no neighbourhood radius found".into()));
            }
            eps = eps / Rational::from_integer(2.into());
        };
        let (abox, bbox, cbox, dbox) = boxes;

        let g_c = self.g_matrix(&w.c);
        let s = rank(&g_c);
        let t2 = self.t2.len();
        if t2 > 0 && s >= t2 {
            return Err(Error::ConstructionFailed("pinned system has no kernel at the witness".into()));
        }
        // Kernel generators through a fixed independent row set, and the
        // coordinates of d in them.
        let kernel = if s >= 1 {
            let rows_i = independent_rows(&g_c);
            let all: Vec<usize> = (0..t2).collect();
            let gi = g_c.submatrix(&all, &rows_i)?;
            let mut chosen: Vec<Vec<usize>> = Vec::new();
            let mut vecs: Vec<Vec<QuadExt>> = Vec::new();
            for cols in subsets(t2, s + 1) {
                let v = minor_vector(&gi, &(0..s).collect::<Vec<_>>(), &cols)?;
                let mut trial = vecs.clone();
                trial.push(v.clone());
                if rank(&Matrix::from_rows(trial)?) == vecs.len() + 1 {
                    vecs.push(v);
                    chosen.push(cols);
                }
            }
            let g = vecs.len();
            let vmat = Matrix::from_fn(t2, g, |r, f| vecs[f][r].clone());
            let d_t2: Vec<QuadExt> = self.t2.iter().map(|&j| w.d[j].clone()).collect();
            let lambda = solve(&LinearSystem::new(vmat, d_t2)?)
                .feasible()
                .ok_or_else(|| Error::ConstructionFailed("d is not in the kernel at the witness".into()))?
                .particular;
            Some((rows_i, chosen, lambda))
        } else {
            None
        };

        // Linear conditions on the rounded c over the pinned columns.
        let unit = |k: usize| -> Vec<Rational> {
            let mut v = vec![Rational::zero(); t2];
            v[k] = Rational::from_integer(1.into());
            v
        };
        let mut eqs = Vec::new();
        for (k, &j) in self.t2.iter().enumerate() {
            if let Some(r) = w.c[j].to_rational() {
                eqs.push((unit(k), r));
            }
        }
        for (i, t) in self.t_rows.iter().enumerate() {
            for (x, &j) in t.iter().enumerate() {
                for &h in &t[x + 1..] {
                    let (aj, ah) = (self.val(i, j), self.val(i, h));
                    let nonzero = !w.c[j].is_zero() && !w.c[h].is_zero() && !aj.is_zero() && !ah.is_zero();
                    let dependent = (&w.c[j].scale(ah) - &w.c[h].scale(aj)).is_zero();
                    if nonzero && dependent {
                        let mut row = vec![Rational::zero(); t2];
                        row[self.pos[j].unwrap()] = ah.clone();
                        row[self.pos[h].unwrap()] = -aj.clone();
                        eqs.push((row, Rational::zero()));
                    }
                }
            }
        }
        let sol_c = solve(&LinearSystem::from_equations(t2, eqs)?)
            .feasible()
            .ok_or_else(|| Error::ConstructionFailed("conditions on c are inconsistent".into()))?;
        let c_t2: Vec<QuadExt> = self.t2.iter().map(|&j| w.c[j].clone()).collect();
        let cbox_t2: Vec<RatInterval> = self.t2.iter().map(|&j| cbox[j].clone()).collect();

        for start in 0..=budget {
            let Some(ct2) = solution_from(&sol_c, &c_t2, &cbox_t2, start) else { break };
            let Some(attempt) = self.attempt(start, &ct2, &kernel, s, [&abox, &bbox, &cbox, &dbox]) else {
                continue;
            };
            let (m, mut branches) = attempt;
            let m = match rank(&m) {
                2 => m,
                _ => match self.fixup(m) {
                    Some(m) => {
                        branches.insert(Branch::RankFixup);
                        m
                    }
                    None => continue,
                },
            };
            if let Ok(res) = certify(&self.alpha, m, 2, Mode::Exact, branches) {
                return Ok(res);
            }
        }
        let _ = (p, q);
        Err(Error::ConstructionFailed("rank-two rounding did not converge within the precision budget".into()))
    }

    #[allow(clippy::type_complexity)]
    fn attempt(
        &self,
        level: u32,
        ct2: &[Rational],
        kernel: &Option<(Vec<usize>, Vec<Vec<usize>>, Vec<QuadExt>)>,
        s: usize,
        boxes: [&Vec<RatInterval>; 4],
    ) -> Option<(Matrix<Rational>, BTreeSet<Branch>)> {
        let w = self.w;
        let [abox, bbox, cbox, dbox] = boxes;
        let (p, q) = self.alpha.shape();
        let t2 = self.t2.len();
        let keep = |x: &QuadExt, iv: &RatInterval| round_from(x, iv, level);
        let mut branches = BTreeSet::new();

        let mut ct = vec![Rational::zero(); q];
        let mut dt = vec![Rational::zero(); q];
        for j in 0..q {
            match self.pos[j] {
                Some(k) => ct[j] = ct2[k].clone(),
                None => {
                    ct[j] = keep(&w.c[j], &cbox[j])?;
                    dt[j] = keep(&w.d[j], &dbox[j])?;
                }
            }
        }
        // (a): zero pattern of c on the pinned columns.
        if self.t2.iter().any(|&j| ct[j].is_zero() != w.c[j].is_zero()) {
            return None;
        }
        if let Some((rows_i, chosen, lambda)) = kernel {
            branches.insert(Branch::KernelBranch);
            let g_t = self.g_matrix(&ct);
            if rank(&g_t) != s {
                return None;
            }
            let all: Vec<usize> = (0..t2).collect();
            let gi = g_t.submatrix(&all, rows_i).ok()?;
            if rank(&gi) != s {
                return None;
            }
            let lt: Vec<Rational> = lambda.iter().map(|l| best_convergent(l, level)).collect();
            let mut d2 = vec![Rational::zero(); t2];
            for (f, cols) in chosen.iter().enumerate() {
                let v = minor_vector(&gi, &(0..s).collect::<Vec<_>>(), cols).ok()?;
                for r in 0..t2 {
                    d2[r] = &d2[r] + &lt[f] * &v[r];
                }
            }
            let ct2v: Vec<Rational> = ct2.to_vec();
            let in_kernel = |v: &[Rational]| g_t.mul_vec(v).map(|x| x.iter().all(Rational::is_zero)).unwrap_or(false);
            if !in_kernel(&d2) || !in_kernel(&ct2v) {
                return None;
            }
            for (k, &j) in self.t2.iter().enumerate() {
                dt[j] = d2[k].clone();
            }
        } else {
            branches.insert(Branch::ZeroBranch);
            for &j in &self.t2 {
                dt[j] = keep(&w.d[j], &dbox[j])?;
            }
        }
        // (c), (d), (e) and row-rank agreement on the pinned columns.
        for (x, &j) in self.t2.iter().enumerate() {
            if !dbox[j].contains(&dt[j]) || (!w.d[j].is_zero() && dt[j].is_zero()) {
                return None;
            }
            for &h in &self.t2[x + 1..] {
                let real = &w.c[j] * &w.d[h] - &w.c[h] * &w.d[j];
                let tilde = &ct[j] * &dt[h] - &ct[h] * &dt[j];
                if !real.is_zero() && tilde.is_zero() {
                    return None;
                }
            }
        }
        for t in &self.t_rows {
            let real = Matrix::from_fn(t.len(), 2, |r, k| if k == 0 { w.c[t[r]].clone() } else { w.d[t[r]].clone() });
            let tilde = Matrix::from_fn(t.len(), 2, |r, k| if k == 0 { ct[t[r]].clone() } else { dt[t[r]].clone() });
            if rank(&real) != rank(&tilde) {
                return None;
            }
        }

        let mut at = vec![Rational::zero(); p];
        let mut bt = vec![Rational::zero(); p];
        for i in 0..p {
            let t = &self.t_rows[i];
            let (a, b) = match t.len() {
                0 => (keep(&w.a[i], &abox[i])?, keep(&w.b[i], &bbox[i])?),
                1 => {
                    branches.insert(Branch::SinglePinRow);
                    let j = t[0];
                    let sys = LinearSystem::from_equations(2, vec![(vec![ct[j].clone(), dt[j].clone()], self.val(i, j).clone())]).ok()?;
                    let sol = solve(&sys).feasible()?;
                    let x = solution_from(&sol, &[w.a[i].clone(), w.b[i].clone()], &[abox[i].clone(), bbox[i].clone()], level)?;
                    (x[0].clone(), x[1].clone())
                }
                _ => {
                    let pair = t.iter().enumerate().find_map(|(x, &j)| {
                        t[x + 1..].iter().find(|&&h| !(&ct[j] * &dt[h] - &ct[h] * &dt[j]).is_zero()).map(|&h| (j, h))
                    });
                    let lead = t.iter().copied().find(|&j| !ct[j].is_zero());
                    let from_b = |b: &Rational, j: usize| (self.val(i, j) - b * &dt[j]) / &ct[j];
                    match (pair, lead) {
                        (Some((j, h)), Some(l)) => {
                            branches.insert(Branch::CrossDetRow);
                            let den = &ct[j] * &dt[h] - &ct[h] * &dt[j];
                            let b = (&ct[j] * self.val(i, h) - &ct[h] * self.val(i, j)) / den;
                            (from_b(&b, l), b)
                        }
                        (None, Some(l)) => {
                            branches.insert(Branch::ProportionalRow);
                            let b = keep(&w.b[i], &bbox[i])?;
                            (from_b(&b, l), b)
                        }
                        _ => {
                            branches.insert(Branch::ZeroCRow);
                            let j = t[0];
                            if dt[j].is_zero() {
                                return None;
                            }
                            (keep(&w.a[i], &abox[i])?, self.val(i, j) / &dt[j])
                        }
                    }
                }
            };
            if !abox[i].contains(&a) || !bbox[i].contains(&b) {
                return None;
            }
            at[i] = a;
            bt[i] = b;
        }
        let m = Matrix::from_fn(p, q, |i, j| &at[i] * &ct[j] + &bt[i] * &dt[j]);
        Some((m, branches))
    }

    /// Moves free entries to an endpoint until the rank reaches two.
    fn fixup(&self, mut m: Matrix<Rational>) -> Option<Matrix<Rational>> {
        let cells: Vec<(usize, usize)> = self.alpha.entries().filter(|(_, _, iv)| !iv.is_degenerate()).map(|(i, j, _)| (i, j)).collect();
        for _ in 0..2 {
            let r = rank(&m);
            if r >= 2 {
                return Some(m);
            }
            let mut improved = false;
            'scan: for &(i, j) in &cells {
                let iv = self.alpha.get(i, j);
                for v in [iv.lo(), iv.hi()] {
                    let mut trial = m.clone();
                    trial.set(i, j, v.clone());
                    if rank(&trial) > r {
                        m = trial;
                        improved = true;
                        break 'scan;
                    }
                }
            }
            if !improved {
                return None;
            }
        }
        (rank(&m) == 2).then_some(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{int, rat};

    fn q(x: i64) -> QuadExt {
        QuadExt::from_rational(int(x))
    }

    fn enclose(r: &Matrix<QuadExt>, rad: Rational) -> IntervalMatrix {
        r.map(|x| {
            let (lo, hi) = x.enclosure(8);
            RatInterval::new(lo - &rad, hi + &rad).unwrap()
        })
    }

    #[test]
    fn rational_witness_degenerate() {
        let w = Rank2Witness {
            a: vec![q(1), q(0), q(1)],
            b: vec![q(0), q(1), q(1)],
            c: vec![q(1), q(1), q(1)],
            d: vec![q(1), q(-1), q(0)],
        };
        let r = w.matrix().to_rational().unwrap();
        let res = realize_rank2(&IntervalMatrix::point(&r), &w).unwrap();
        assert_eq!(res.matrix, r);
    }

    #[test]
    fn planted_open_and_pinned() {
        let s = QuadExt::sqrt(2).unwrap();
        let w = Rank2Witness {
            a: vec![q(1), s.clone(), q(0)],
            b: vec![q(0), q(1), q(1)],
            c: vec![q(1), q(1), q(1)],
            d: vec![s.clone(), q(0), q(1)],
        };
        let r = w.matrix();
        let alpha = enclose(&r, rat(1, 10));
        let res = realize_rank2(&alpha, &w).unwrap();
        assert_eq!(rank(&res.matrix), 2);
        let mut pinned = alpha.clone();
        pinned.set(0, 0, RatInterval::point(r.get(0, 0).to_rational().unwrap()));
        pinned.set(0, 1, RatInterval::point(r.get(0, 1).to_rational().unwrap()));
        pinned.set(2, 1, RatInterval::point(r.get(2, 1).to_rational().unwrap()));
        let res = realize_rank2(&pinned, &w).unwrap();
        assert_eq!(res.matrix.get(0, 0), &int(1));
        assert_eq!(res.matrix.get(0, 1), &int(1));
        assert_eq!(res.matrix.get(2, 1), &int(0));
        assert_eq!(rank(&res.matrix), 2);
    }
}
