//! Planted instances with a known witness, plus brute-force cross-checks.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::approx::{rational_above, rational_below};
use crate::linalg::{field_rank, rank, solve, LinearSystem, Matrix, QuadMatrix, RationalMatrix};
use crate::number::{IntervalMatrix, QuadExt, RatInterval, Rational};
use crate::realize::{Branch, ColumnDepWitness, Mode, Rank2Witness, RealizationResult, Side, Witness};

const MAX_DRAWS: usize = 64;

/// Target rank, possibly relative to the column count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RankClass {
    Zero,
    One,
    Two,
    QMinusTwo,
    QMinusOne,
    Full,
}

impl RankClass {
    pub fn rank(self, q: usize) -> Option<usize> {
        match self {
            RankClass::Zero => Some(0),
            RankClass::One => Some(1),
            RankClass::Two => Some(2),
            RankClass::QMinusTwo => q.checked_sub(2),
            RankClass::QMinusOne => q.checked_sub(1),
            RankClass::Full => Some(q),
        }
    }

    /// Class of an absolute rank `r` for `q` columns.
    pub fn from_rank(r: usize, q: usize) -> Option<Self> {
        match r {
            0 => Some(RankClass::Zero),
            1 => Some(RankClass::One),
            2 => Some(RankClass::Two),
            _ if r == q => Some(RankClass::Full),
            _ if r + 1 == q => Some(RankClass::QMinusOne),
            _ if r + 2 == q => Some(RankClass::QMinusTwo),
            _ => None,
        }
    }

    pub fn all() -> [RankClass; 6] {
        [
            RankClass::Zero,
            RankClass::One,
            RankClass::Two,
            RankClass::QMinusTwo,
            RankClass::QMinusOne,
            RankClass::Full,
        ]
    }
}

impl fmt::Display for RankClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RankClass::Zero => "0",
            RankClass::One => "1",
            RankClass::Two => "2",
            RankClass::QMinusTwo => "q-2",
            RankClass::QMinusOne => "q-1",
            RankClass::Full => "q",
        })
    }
}

impl FromStr for RankClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RankClass::all()
            .into_iter()
            .find(|c| c.to_string() == s.trim())
            .ok_or_else(|| Error::Parse { line: 0, column: 0, message: format!("unknown rank class {s:?}") })
    }
}

/// Parameters of a planted instance.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceSpec {
    pub p: usize,
    pub q: usize,
    pub rank_class: RankClass,
    pub radicand: u64,
    pub enclosure_radius: Rational,
    pub degenerate_fraction: Rational,
    pub case_targets: Vec<Branch>,
    pub seed: u64,
}

impl InstanceSpec {
    pub fn new(p: usize, q: usize, rank_class: RankClass, radicand: u64, seed: u64) -> Self {
        InstanceSpec {
            p,
            q,
            rank_class,
            radicand,
            enclosure_radius: Rational::new(1.into(), 10.into()),
            degenerate_fraction: Rational::zero(),
            case_targets: Vec::new(),
            seed,
        }
    }

    pub fn with_radius(mut self, r: Rational) -> Self {
        self.enclosure_radius = r;
        self
    }

    pub fn with_degenerate_fraction(mut self, f: Rational) -> Self {
        self.degenerate_fraction = f;
        self
    }

    pub fn with_targets(mut self, targets: Vec<Branch>) -> Self {
        self.case_targets = targets;
        self
    }

    /// Checks the parameters and returns the absolute target rank.
    pub fn validate(&self) -> Result<usize> {
        let bad = |m: String| Err(Error::UnsatisfiableSpec(m));
        if self.p == 0 || self.q == 0 {
            return bad("dimensions must be positive".into());
        }
        if self.p < self.q {
            return bad(format!("need p >= q, got {}x{}", self.p, self.q));
        }
        QuadExt::sqrt(self.radicand).map_err(|e| Error::UnsatisfiableSpec(e.to_string()))?;
        if !self.enclosure_radius.is_positive() {
            return bad("enclosure radius must be positive".into());
        }
        if self.degenerate_fraction.is_negative() || self.degenerate_fraction > Rational::one() {
            return bad("degenerate fraction must lie in [0, 1]".into());
        }
        match self.rank_class.rank(self.q) {
            Some(r) => Ok(r),
            None => bad(format!("rank class {} needs more than {} columns", self.rank_class, self.q)),
        }
    }
}

/// A planted instance: the interval matrix contains the witness exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub witness: Witness,
    pub alpha: IntervalMatrix,
    pub rank: usize,
}

/// Which witness form and construction a rank uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Form {
    Zero,
    Full,
    Dyad,
    Rank2,
    ColumnDep(usize),
}

fn form_of(r: usize, q: usize) -> Form {
    match r {
        0 => Form::Zero,
        _ if r == q => Form::Full,
        1 => Form::Dyad,
        2 => Form::Rank2,
        _ => Form::ColumnDep(q - r),
    }
}

struct Gen {
    rng: ChaCha8Rng,
    sqrt_d: QuadExt,
}

impl Gen {
    fn small(&mut self) -> Rational {
        let n: i64 = self.rng.gen_range(-6..=6);
        let d: i64 = self.rng.gen_range(1..=4);
        Rational::new(n.into(), d.into())
    }

    fn nonzero(&mut self) -> Rational {
        loop {
            let r = self.small();
            if !r.is_zero() {
                return r;
            }
        }
    }

    fn irrational(&mut self) -> QuadExt {
        let a = self.small();
        let b = self.nonzero();
        QuadExt::from_rational(a) + self.sqrt_d.scale(&b)
    }

    /// Irrational with probability `pi`, else a small rational.
    fn mixed(&mut self, pi: f64) -> QuadExt {
        if self.rng.gen_bool(pi) {
            self.irrational()
        } else {
            QuadExt::from_rational(self.small())
        }
    }

    fn vec(&mut self, n: usize, pi: f64) -> Vec<QuadExt> {
        (0..n).map(|_| self.mixed(pi)).collect()
    }

    fn enclose(&mut self, x: &QuadExt, radius: &Rational) -> RatInterval {
        let k: i64 = self.rng.gen_range(1..=4);
        let r = radius * Rational::new(k.into(), 4.into());
        match x.to_rational() {
            Some(v) => RatInterval::hull(&v - &r, &v + &r),
            None => {
                // Endpoints at distance between r/2 and r from x.
                let h = QuadExt::from_rational(&r / Rational::from_integer(2.into()));
                let hr = h.rat_part().clone();
                RatInterval::hull(rational_below(&(x - &h), &hr), rational_above(&(x + &h), &hr))
            }
        }
    }
}

fn column_dep_matrix(base: &QuadMatrix, coeffs: &[&Vec<QuadExt>]) -> QuadMatrix {
    let (p, m) = base.shape();
    let k = coeffs.len();
    Matrix::from_fn(p, m + k, |i, j| {
        if j < m {
            base.get(i, j).clone()
        } else {
            (0..m).fold(QuadExt::zero(), |acc, l| acc + base.get(i, l) * &coeffs[j - m][l])
        }
    })
}

/// Plants a witness of the requested rank class and encloses it.
pub fn plant(spec: &InstanceSpec) -> Result<Instance> {
    let r = spec.validate()?;
    let form = form_of(r, spec.q);
    let mut g = Gen { rng: ChaCha8Rng::seed_from_u64(spec.seed), sqrt_d: QuadExt::sqrt(spec.radicand)? };
    let (witness, pins) = if spec.case_targets.is_empty() {
        random_plant(spec, form, r, &mut g)?
    } else {
        targeted_plant(spec, form, r, &mut g)?
    };
    let h = witness.matrix();
    let alpha = Matrix::from_fn(spec.p, spec.q, |i, j| (i, j)).map(|&(i, j)| {
        let x = h.get(i, j);
        match pins.contains(&(i, j)) {
            true => RatInterval::point(x.to_rational().expect("pins are rational")),
            false => g.enclose(x, &spec.enclosure_radius),
        }
    });
    debug_assert!(alpha.contains_quad(&h).unwrap_or(false));
    Ok(Instance { witness, alpha, rank: r })
}

fn random_witness(spec: &InstanceSpec, form: Form, r: usize, g: &mut Gen, pi: f64) -> Option<Witness> {
    let (p, q) = (spec.p, spec.q);
    let w = match form {
        Form::Zero => Witness::Matrix(Matrix::from_fn(p, q, |_, _| QuadExt::zero())),
        Form::Full => Witness::Matrix(Matrix::from_rows((0..p).map(|_| g.vec(q, pi)).collect()).ok()?),
        Form::Dyad => Witness::Rank2(Rank2Witness::dyad(g.vec(p, pi), g.vec(q, pi))),
        Form::Rank2 => Witness::Rank2(Rank2Witness { a: g.vec(p, pi), b: g.vec(p, pi), c: g.vec(q, pi), d: g.vec(q, pi) }),
        Form::ColumnDep(k) => {
            let m = q - k;
            let base = Matrix::from_rows((0..p).map(|_| g.vec(m, pi)).collect()).ok()?;
            let cb = if k == 2 { g.vec(m, pi) } else { Vec::new() };
            let cc = g.vec(m, pi);
            let coeffs: Vec<&Vec<QuadExt>> = if k == 2 { vec![&cb, &cc] } else { vec![&cc] };
            let matrix = column_dep_matrix(&base, &coeffs);
            Witness::ColumnDep(ColumnDepWitness { matrix, coeffs_b: cb, coeffs_c: cc })
        }
    };
    (rank(&w.matrix()) == r).then_some(w)
}

fn random_plant(spec: &InstanceSpec, form: Form, r: usize, g: &mut Gen) -> Result<(Witness, BTreeSet<(usize, usize)>)> {
    let cells = spec.p * spec.q;
    let want = (&spec.degenerate_fraction * Rational::from_integer(cells.into())).floor().to_integer();
    let want: usize = want.try_into().unwrap_or(cells);
    for draw in 0..MAX_DRAWS {
        // Later draws lean rational so that high pin fractions stay feasible.
        let pi = 0.5 * (1.0 - draw as f64 / MAX_DRAWS as f64);
        let Some(w) = random_witness(spec, form, r, g, pi) else { continue };
        let h = w.matrix();
        let mut rational: Vec<(usize, usize)> =
            h.entries().filter(|(_, _, x)| x.is_rational()).map(|(i, j, _)| (i, j)).collect();
        if rational.len() < want {
            continue;
        }
        rational.shuffle(&mut g.rng);
        return Ok((w, rational.into_iter().take(want).collect()));
    }
    Err(Error::UnsatisfiableSpec(format!(
        "could not plant {want} degenerate cells at rational witness entries"
    )))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Family {
    Zero,
    Full,
    Dyad,
    Rank2,
    /// Column relations; `true` when both dependent columns are needed.
    Dep(bool),
    Any,
}

fn family(b: &Branch) -> Family {
    use Branch::*;
    match b {
        ZeroMatrix => Family::Zero,
        FullRankRounding | DeterminantShrink => Family::Full,
        RationalWitness => Family::Any,
        KernelBranch | ZeroBranch | SinglePinRow | CrossDetRow | ProportionalRow | ZeroCRow | RankFixup => Family::Rank2,
        DyadPinRow | DyadZeroRow => Family::Dyad,
        NondegenerateRow | FreeColumn | PivotRow(Side::C) | SystemRow { side: Side::C, .. } => Family::Dep(false),
        PivotRow(Side::B)
        | SystemRow { side: Side::B, .. }
        | SplitPivotRow
        | SharedPivotRow { .. }
        | MixedRow(_)
        | DoubleSystemRow => Family::Dep(true),
    }
}

fn targeted_plant(spec: &InstanceSpec, form: Form, r: usize, g: &mut Gen) -> Result<(Witness, BTreeSet<(usize, usize)>)> {
    let targets: Vec<Branch> = {
        let mut seen = BTreeSet::new();
        spec.case_targets.iter().filter(|t| seen.insert((*t).clone())).cloned().collect()
    };
    for t in &targets {
        let ok = match (family(t), form) {
            (Family::Any, _) => true,
            (Family::Zero, Form::Zero) | (Family::Full, Form::Full) | (Family::Dyad, Form::Dyad) | (Family::Rank2, Form::Rank2) => true,
            (Family::Dep(two), Form::ColumnDep(k)) => !two || k == 2,
            _ => false,
        };
        if !ok {
            return Err(Error::UnsatisfiableSpec(format!("case target {t} does not occur at rank {} with {} columns", r, spec.q)));
        }
    }
    let unsat = |m: &str| Error::UnsatisfiableSpec(m.to_string());
    for _ in 0..MAX_DRAWS {
        let planted = match form {
            Form::Rank2 => rank2_gadgets(spec, &targets, g)?,
            Form::Dyad => dyad_gadgets(spec, &targets, g)?,
            Form::ColumnDep(k) => dep_gadgets(spec, k, &targets, g)?,
            _ => {
                let pi = if targets.contains(&Branch::RationalWitness) { 0.0 } else { 0.5 };
                random_witness(spec, form, r, g, pi).map(|w| (w, BTreeSet::new()))
            }
        };
        if let Some((w, pins)) = planted {
            if rank(&w.matrix()) == r {
                return Ok((w, pins));
            }
        }
    }
    Err(unsat("no witness of the requested rank for these case targets"))
}

type Planted = Option<(Witness, BTreeSet<(usize, usize)>)>;

fn rank2_gadgets(spec: &InstanceSpec, targets: &[Branch], g: &mut Gen) -> Result<Planted> {
    let (p, q) = (spec.p, spec.q);
    let s = g.sqrt_d.clone();
    let int = |n: i64| QuadExt::from_rational(Rational::from_integer(n.into()));
    let has = |b: Branch| targets.contains(&b);
    if has(Branch::RankFixup) {
        if targets.iter().any(|t| !matches!(t, Branch::RankFixup | Branch::ZeroBranch)) {
            return Err(Error::UnsatisfiableSpec("the rank fixup instance admits no other targets".into()));
        }
        // A tiny second dyad: rounding drops it and leaves rank one.
        let tiny = (&s - &int(1)).scale(&Rational::new(1.into(), 1024.into()));
        let mut b = vec![QuadExt::zero(); p];
        let mut d = vec![QuadExt::zero(); q];
        b[1] = tiny;
        d[1] = int(1);
        let w = Rank2Witness { a: vec![int(1); p], b, c: vec![int(1); q], d };
        return Ok(Some((Witness::Rank2(w), BTreeSet::new())));
    }
    if has(Branch::ZeroBranch) && (has(Branch::KernelBranch) || has(Branch::ZeroCRow)) {
        return Err(Error::UnsatisfiableSpec("a zero pinned system excludes kernel-branch targets".into()));
    }
    type Gadget = ((QuadExt, QuadExt), Vec<(QuadExt, QuadExt)>);
    let mut gadgets: Vec<Gadget> = Vec::new();
    if has(Branch::SinglePinRow) || has(Branch::ZeroBranch) {
        gadgets.push(((int(1), int(0)), vec![(int(1), s.clone())]));
    }
    if has(Branch::CrossDetRow) {
        gadgets.push(((int(1), int(1)), vec![(int(1), int(0)), (int(0), int(1))]));
    }
    if has(Branch::ProportionalRow) {
        gadgets.push(((s.clone(), &int(1) - &s), vec![(int(1), int(1)), (int(2), int(2))]));
    }
    if has(Branch::ZeroCRow) || has(Branch::KernelBranch) {
        gadgets.push(((s.clone(), int(1)), vec![(int(0), int(1)), (int(0), int(2))]));
    }
    let cols: usize = gadgets.iter().map(|(_, c)| c.len()).sum();
    if gadgets.len() > p || cols > q {
        return Err(Error::UnsatisfiableSpec(format!("case targets need {} rows and {cols} columns", gadgets.len())));
    }
    let mut w = Rank2Witness {
        a: (0..p).map(|_| g.irrational()).collect(),
        b: (0..p).map(|_| g.irrational()).collect(),
        c: (0..q).map(|_| g.irrational()).collect(),
        d: (0..q).map(|_| g.irrational()).collect(),
    };
    let mut pins = BTreeSet::new();
    let mut j0 = 0;
    for (i, ((a, b), cs)) in gadgets.into_iter().enumerate() {
        w.a[i] = a;
        w.b[i] = b;
        for (k, (c, d)) in cs.into_iter().enumerate() {
            w.c[j0 + k] = c;
            w.d[j0 + k] = d;
            pins.insert((i, j0 + k));
        }
        j0 = pins.iter().map(|&(_, j)| j + 1).max().unwrap_or(0);
    }
    if !pins.iter().all(|&(i, j)| w.matrix().get(i, j).is_rational()) {
        return Ok(None);
    }
    Ok(Some((Witness::Rank2(w), pins)))
}

fn dyad_gadgets(spec: &InstanceSpec, targets: &[Branch], g: &mut Gen) -> Result<Planted> {
    let (p, q) = (spec.p, spec.q);
    let mut a: Vec<QuadExt> = (0..p).map(|_| g.irrational()).collect();
    let mut c: Vec<QuadExt> = (0..q).map(|_| g.irrational()).collect();
    let mut pins = BTreeSet::new();
    let mut row = 0;
    let mut col = 0;
    if targets.contains(&Branch::DyadPinRow) {
        a[row] = QuadExt::one();
        c[col] = QuadExt::one();
        pins.insert((row, col));
        row += 1;
        col += 1;
    }
    if targets.contains(&Branch::DyadZeroRow) {
        if row >= p || col >= q {
            return Err(Error::UnsatisfiableSpec("case targets need more rows or columns".into()));
        }
        c[col] = QuadExt::zero();
        pins.insert((row, col));
    }
    Ok(Some((Witness::Rank2(Rank2Witness::dyad(a, c)), pins)))
}

/// Free entries and pinned dependent columns of a gadget row.
fn dep_recipe(t: &Branch, two: bool) -> (Option<Vec<usize>>, Vec<usize>) {
    use Branch::*;
    let (b, c) = if two { (0, 1) } else { (usize::MAX, 0) };
    match t {
        NondegenerateRow | FreeColumn | RationalWitness => (None, vec![]),
        PivotRow(Side::B) => (None, vec![b]),
        SystemRow { side: Side::B, free_entries } => (Some(if *free_entries { vec![1] } else { vec![] }), vec![b]),
        PivotRow(Side::C) => (None, vec![c]),
        SystemRow { side: Side::C, free_entries } => {
            let free = if two { vec![0] } else { vec![1] };
            (Some(if *free_entries { free } else { vec![] }), vec![c])
        }
        SplitPivotRow => (Some(vec![0, 1]), vec![b, c]),
        SharedPivotRow { entry_solvable: true } => (Some(vec![0, 2]), vec![b, c]),
        SharedPivotRow { entry_solvable: false } => (Some(vec![2, 3]), vec![b, c]),
        MixedRow(Side::B) => (Some(vec![0]), vec![b, c]),
        MixedRow(Side::C) => (Some(vec![1]), vec![b, c]),
        DoubleSystemRow => (Some(vec![]), vec![b, c]),
        _ => (None, vec![]),
    }
}

fn dep_gadgets(spec: &InstanceSpec, k: usize, targets: &[Branch], g: &mut Gen) -> Result<Planted> {
    let (p, q) = (spec.p, spec.q);
    let m = q - k;
    let two = k == 2;
    let s = g.sqrt_d.clone();
    let int = |n: i64| QuadExt::from_rational(Rational::from_integer(n.into()));
    let d = int(spec.radicand as i64);
    let free_col = two && targets.contains(&Branch::FreeColumn);
    let need = if two { 4 + usize::from(free_col) } else { 3 };
    if m < need {
        return Err(Error::UnsatisfiableSpec(format!("case targets need at least {need} base columns")));
    }
    let rows: Vec<&Branch> = targets.iter().filter(|t| !matches!(t, Branch::FreeColumn | Branch::RationalWitness)).collect();
    if rows.len() > p {
        return Err(Error::UnsatisfiableSpec("more case targets than rows".into()));
    }
    let mut coeffs: Vec<Vec<QuadExt>> = if two {
        let mut b = vec![s.clone(), int(0), s.clone(), int(1)];
        let mut c = vec![int(0), s.clone(), d.clone(), s.clone()];
        if free_col {
            b.push(int(0));
            c.push(int(0));
        }
        vec![b, c]
    } else {
        vec![vec![s.clone(), int(0), int(1)]]
    };
    for v in coeffs.iter_mut() {
        while v.len() < m {
            v.push(g.irrational());
        }
    }
    let mut base = Matrix::from_fn(p, m, |_, _| QuadExt::zero());
    let mut pins = BTreeSet::new();
    for i in 0..p {
        let (free, sides) = match rows.get(i) {
            Some(t) => dep_recipe(t, two),
            None => (None, vec![]),
        };
        let free = free.unwrap_or_else(|| (0..m).collect());
        let row = dep_row(g, &coeffs, &free, &sides, m)?;
        for (j, v) in row.into_iter().enumerate() {
            if !free.contains(&j) {
                pins.insert((i, j));
            }
            base.set(i, j, v);
        }
        for &sd in &sides {
            pins.insert((i, m + sd));
        }
    }
    let refs: Vec<&Vec<QuadExt>> = coeffs.iter().collect();
    let matrix = column_dep_matrix(&base, &refs);
    let (coeffs_b, coeffs_c) = if two { (coeffs[0].clone(), coeffs[1].clone()) } else { (Vec::new(), coeffs[0].clone()) };
    if matrix.is_rational() || !pins.iter().all(|&(i, j)| matrix.get(i, j).is_rational()) {
        return Ok(None);
    }
    Ok(Some((Witness::ColumnDep(ColumnDepWitness { matrix, coeffs_b, coeffs_c }), pins)))
}

/// Random row whose entries off `free` are rational and whose
/// combinations with the coefficients of `sides` are rational.
fn dep_row(g: &mut Gen, coeffs: &[Vec<QuadExt>], free: &[usize], sides: &[usize], m: usize) -> Result<Vec<QuadExt>> {
    // Unknowns x_j, y_j with entry x_j + y_j √d.
    let n = 2 * m;
    let mut eqs = Vec::new();
    for j in (0..m).filter(|j| !free.contains(j)) {
        let mut row = vec![Rational::zero(); n];
        row[2 * j + 1] = Rational::one();
        eqs.push((row, Rational::zero()));
    }
    for &sd in sides {
        let mut row = vec![Rational::zero(); n];
        for (j, gamma) in coeffs[sd].iter().enumerate() {
            row[2 * j] = gamma.irr_part().clone();
            row[2 * j + 1] = gamma.rat_part().clone();
        }
        eqs.push((row, Rational::zero()));
    }
    let sol = solve(&LinearSystem::from_equations(n, eqs)?)
        .feasible()
        .ok_or_else(|| Error::UnsatisfiableSpec("gadget row has no solution".into()))?;
    let values: Vec<Rational> = sol.free.iter().map(|_| g.nonzero()).collect();
    let x = sol.with_free(&values);
    Ok((0..m).map(|j| QuadExt::from_rational(x[2 * j].clone()) + g.sqrt_d.scale(&x[2 * j + 1])).collect())
}

/// Smallest rank seen among sampled rational members of `alpha`, and among
/// all vertex matrices when there are at most `budget` of them.
pub fn minrank_upper_oracle(alpha: &IntervalMatrix, budget: usize) -> usize {
    let (p, q) = alpha.shape();
    let mut best = p.min(q);
    let mut consider = |m: RationalMatrix| best = best.min(rank(&m));
    let clamp = |iv: &RatInterval| {
        if iv.contains_zero() {
            Rational::zero()
        } else if iv.lo().is_positive() {
            iv.lo().clone()
        } else {
            iv.hi().clone()
        }
    };
    consider(alpha.map(clamp));
    consider(alpha.mid());
    let cells: Vec<(usize, usize)> = alpha.entries().filter(|(_, _, iv)| !iv.is_degenerate()).map(|(i, j, _)| (i, j)).collect();
    if cells.len() < usize::BITS as usize && 1usize << cells.len() <= budget {
        for t in 0..1usize << cells.len() {
            let mut v = alpha.map(|iv| iv.lo().clone());
            for (k, &(i, j)) in cells.iter().enumerate() {
                if t >> k & 1 == 1 {
                    v.set(i, j, alpha.get(i, j).hi().clone());
                }
            }
            consider(v);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..budget {
        consider(alpha.map(|iv| {
            let k: i64 = rng.gen_range(0..=16);
            iv.lo() + iv.width() * Rational::new(k.into(), 16.into())
        }));
    }
    best
}

/// Outcome of re-checking a realization from scratch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub contained: bool,
    pub degenerate_exact: bool,
    pub rank: usize,
    pub target_rank: usize,
    pub mode: String,
    pub rank_ok: bool,
    pub violations: Vec<String>,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Recomputes containment, pinned-entry equality and rank by plain
/// endpoint comparison and field elimination.
pub fn check_certificate(alpha: &IntervalMatrix, result: &RealizationResult) -> CertificateReport {
    let m = &result.matrix;
    let mut violations = Vec::new();
    if m.shape() != alpha.shape() {
        violations.push(format!("shape {}x{} differs from {}x{}", m.rows(), m.cols(), alpha.rows(), alpha.cols()));
        return CertificateReport {
            contained: false,
            degenerate_exact: false,
            rank: field_rank(m),
            target_rank: result.target_rank,
            mode: result.mode.to_string(),
            rank_ok: false,
            violations,
        };
    }
    let mut contained = true;
    let mut degenerate_exact = true;
    for (i, j, iv) in alpha.entries() {
        let v = m.get(i, j);
        if v < iv.lo() || v > iv.hi() {
            contained = false;
            violations.push(format!("entry ({}, {}) = {v} outside {iv}", i + 1, j + 1));
        }
        if iv.lo() == iv.hi() && v != iv.lo() {
            degenerate_exact = false;
            violations.push(format!("entry ({}, {}) = {v} differs from pinned value {}", i + 1, j + 1, iv.lo()));
        }
    }
    let r = field_rank(m);
    let rank_ok = match result.mode {
        Mode::Exact => r == result.target_rank,
        Mode::AtMost => r <= result.target_rank,
    };
    if !rank_ok {
        violations.push(format!("rank {r} does not satisfy {} {}", result.mode, result.target_rank));
    }
    CertificateReport {
        contained,
        degenerate_exact,
        rank: r,
        target_rank: result.target_rank,
        mode: result.mode.to_string(),
        rank_ok,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{int, rat};
    use crate::realize::realize;

    fn mode_for(r: usize, q: usize) -> Mode {
        if r + 1 == q || r + 2 == q { Mode::AtMost } else { Mode::Exact }
    }

    #[test]
    fn deterministic_in_seed() {
        let spec = InstanceSpec::new(4, 3, RankClass::Two, 2, 7);
        assert_eq!(plant(&spec).unwrap(), plant(&spec).unwrap());
        let other = InstanceSpec { seed: 8, ..spec.clone() };
        assert_ne!(plant(&spec).unwrap(), plant(&other).unwrap());
    }

    #[test]
    fn every_target_is_hit() {
        let rank2 = [
            Branch::KernelBranch,
            Branch::ZeroBranch,
            Branch::SinglePinRow,
            Branch::CrossDetRow,
            Branch::ProportionalRow,
            Branch::ZeroCRow,
            Branch::RankFixup,
        ];
        for t in rank2 {
            let spec = InstanceSpec::new(5, 4, RankClass::Two, 3, 1).with_targets(vec![t.clone()]);
            let inst = plant(&spec).unwrap();
            let res = realize(&inst.alpha, &inst.witness, 2, Mode::Exact).unwrap();
            assert!(res.branches.contains(&t), "{t}: {:?}", res.branches);
        }
        let two_side: Vec<Branch> = Branch::all().into_iter().filter(|b| matches!(family(b), Family::Dep(_))).collect();
        for t in two_side {
            let spec = InstanceSpec::new(7, 7, RankClass::QMinusTwo, 5, 2).with_targets(vec![t.clone()]);
            let inst = plant(&spec).unwrap();
            let res = realize(&inst.alpha, &inst.witness, 5, Mode::AtMost).unwrap();
            assert!(res.branches.contains(&t), "{t}: {:?}", res.branches);
        }
    }

    #[test]
    fn random_plants_realize() {
        for seed in 0..6 {
            for class in RankClass::all() {
                let spec = InstanceSpec::new(5, 4, class, 2, seed).with_degenerate_fraction(rat(3, 10));
                let inst = plant(&spec).unwrap();
                let res = realize(&inst.alpha, &inst.witness, inst.rank, mode_for(inst.rank, 4)).unwrap();
                assert!(check_certificate(&inst.alpha, &res).passed());
            }
        }
    }

    #[test]
    fn oracle_examples() {
        let id = IntervalMatrix::point(&Matrix::identity(2));
        assert_eq!(minrank_upper_oracle(&id, 4), 2);
        let wide = Matrix::from_fn(2, 3, |_, _| RatInterval::new(int(-1), int(1)).unwrap());
        assert_eq!(minrank_upper_oracle(&wide, 1), 0);
    }

    #[test]
    fn certificate_flags_tampering() {
        let spec = InstanceSpec::new(3, 3, RankClass::Two, 2, 7);
        let inst = plant(&spec).unwrap();
        let res = realize(&inst.alpha, &inst.witness, 2, Mode::Exact).unwrap();
        assert!(check_certificate(&inst.alpha, &res).passed());
        let mut bad = res.clone();
        let hi = inst.alpha.get(0, 0).hi().clone();
        bad.matrix.set(0, 0, hi + int(1));
        assert!(!check_certificate(&inst.alpha, &bad).contained);
        let mut claim = res.clone();
        claim.target_rank = 1;
        assert!(!check_certificate(&inst.alpha, &claim).rank_ok);
    }
}
