//! Rational matrices of prescribed rank inside an interval matrix, built
//! from a real witness over a quadratic field.

mod boxes;
mod corank;
mod full;
mod low;
mod rank2;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, nonsingular_block, rank, rref, Matrix, QuadMatrix, RationalMatrix};
use crate::number::{IntervalMatrix, QuadExt, RatInterval};

pub use corank::{realize_rank_le_qm1, realize_rank_le_qm2};
pub use full::{box_det_sign, realize_full_rank, realize_rank_exact};
pub use low::{realize_rank0, realize_rank1};
pub use rank2::realize_rank2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    AtMost,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::AtMost => "at-most",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "at-most" | "atmost" => Ok(Mode::AtMost),
            _ => Err(Error::Parse { line: 0, column: 0, message: format!("unknown mode {s:?}") }),
        }
    }
}

/// Dependent column of a column-dependence witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    /// Second to last column, coefficients `b`.
    B,
    /// Last column, coefficients `c`.
    C,
}

impl Side {
    fn tag(self) -> &'static str {
        match self {
            Side::B => "b",
            Side::C => "c",
        }
    }
}

/// Which construction step handled a row or column.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    ZeroMatrix,
    RationalWitness,
    FullRankRounding,
    DeterminantShrink,
    // rank two
    KernelBranch,
    ZeroBranch,
    SinglePinRow,
    CrossDetRow,
    ProportionalRow,
    ZeroCRow,
    RankFixup,
    // rank one
    DyadPinRow,
    DyadZeroRow,
    // column dependence
    FreeColumn,
    NondegenerateRow,
    PivotRow(Side),
    SystemRow { side: Side, free_entries: bool },
    SplitPivotRow,
    SharedPivotRow { entry_solvable: bool },
    MixedRow(Side),
    DoubleSystemRow,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::ZeroMatrix => f.write_str("zero-matrix"),
            Branch::RationalWitness => f.write_str("rational-witness"),
            Branch::FullRankRounding => f.write_str("full-rank-rounding"),
            Branch::DeterminantShrink => f.write_str("determinant-shrink"),
            Branch::KernelBranch => f.write_str("rank2-kernel"),
            Branch::ZeroBranch => f.write_str("rank2-zero-g"),
            Branch::SinglePinRow => f.write_str("rank2-single-pin-row"),
            Branch::CrossDetRow => f.write_str("rank2-cross-det-row"),
            Branch::ProportionalRow => f.write_str("rank2-proportional-row"),
            Branch::ZeroCRow => f.write_str("rank2-zero-c-row"),
            Branch::RankFixup => f.write_str("rank2-fixup"),
            Branch::DyadPinRow => f.write_str("rank1-pin-row"),
            Branch::DyadZeroRow => f.write_str("rank1-zero-row"),
            Branch::FreeColumn => f.write_str("dep-free-column"),
            Branch::NondegenerateRow => f.write_str("dep-nondegenerate-row"),
            Branch::PivotRow(s) => write!(f, "dep-pivot-row-{}", s.tag()),
            Branch::SystemRow { side, free_entries } => {
                write!(f, "dep-system-row-{}{}", side.tag(), if *free_entries { "-free" } else { "" })
            }
            Branch::SplitPivotRow => f.write_str("dep-split-pivot-row"),
            Branch::SharedPivotRow { entry_solvable } => {
                write!(f, "dep-shared-pivot-row{}", if *entry_solvable { "" } else { "-constrained" })
            }
            Branch::MixedRow(s) => write!(f, "dep-mixed-row-pivot-{}", s.tag()),
            Branch::DoubleSystemRow => f.write_str("dep-double-system-row"),
        }
    }
}

impl Branch {
    /// Every branch tag, in order.
    pub fn all() -> Vec<Branch> {
        let mut v = vec![
            Branch::ZeroMatrix,
            Branch::RationalWitness,
            Branch::FullRankRounding,
            Branch::DeterminantShrink,
            Branch::KernelBranch,
            Branch::ZeroBranch,
            Branch::SinglePinRow,
            Branch::CrossDetRow,
            Branch::ProportionalRow,
            Branch::ZeroCRow,
            Branch::RankFixup,
            Branch::DyadPinRow,
            Branch::DyadZeroRow,
            Branch::FreeColumn,
            Branch::NondegenerateRow,
        ];
        for side in [Side::B, Side::C] {
            v.push(Branch::PivotRow(side));
            v.push(Branch::SystemRow { side, free_entries: true });
            v.push(Branch::SystemRow { side, free_entries: false });
            v.push(Branch::MixedRow(side));
        }
        v.extend([
            Branch::SplitPivotRow,
            Branch::SharedPivotRow { entry_solvable: true },
            Branch::SharedPivotRow { entry_solvable: false },
            Branch::DoubleSystemRow,
        ]);
        v
    }
}

impl std::str::FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Branch::all()
            .into_iter()
            .find(|b| b.to_string() == s)
            .ok_or_else(|| Error::Parse { line: 0, column: 0, message: format!("unknown branch tag {s:?}") })
    }
}

/// A rational matrix inside the interval matrix with a certified rank.
#[derive(Clone, Debug, PartialEq)]
pub struct RealizationResult {
    pub matrix: RationalMatrix,
    pub target_rank: usize,
    pub mode: Mode,
    pub branches: BTreeSet<Branch>,
}

/// `r_ij = a_i c_j + b_i d_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rank2Witness {
    pub a: Vec<QuadExt>,
    pub b: Vec<QuadExt>,
    pub c: Vec<QuadExt>,
    pub d: Vec<QuadExt>,
}

impl Rank2Witness {
    pub fn matrix(&self) -> QuadMatrix {
        Matrix::from_fn(self.a.len(), self.c.len(), |i, j| &self.a[i] * &self.c[j] + &self.b[i] * &self.d[j])
    }

    /// Single dyad `a c^T`.
    pub fn dyad(a: Vec<QuadExt>, c: Vec<QuadExt>) -> Self {
        let (p, q) = (a.len(), c.len());
        Rank2Witness { a, b: vec![QuadExt::zero(); p], c, d: vec![QuadExt::zero(); q] }
    }

    /// Factor a rank-two matrix through a nonsingular 2x2 block.
    pub fn from_matrix(m: &QuadMatrix) -> Result<Self> {
        let (rows, cols) = nonsingular_block(m);
        if rows.len() != 2 {
            return Err(Error::WitnessInvalid(format!("witness has rank {}, expected 2", rows.len())));
        }
        let blk = |i: usize, j: usize| m.get(rows[i], cols[j]).clone();
        let det = &blk(0, 0) * &blk(1, 1) - &blk(0, 1) * &blk(1, 0);
        let inv = [
            [&blk(1, 1) / &det, -(&blk(0, 1) / &det)],
            [-(&blk(1, 0) / &det), &blk(0, 0) / &det],
        ];
        let left = |i: usize, k: usize| &(m.get(i, cols[0]) * &inv[0][k]) + &(m.get(i, cols[1]) * &inv[1][k]);
        Ok(Rank2Witness {
            a: (0..m.rows()).map(|i| left(i, 0)).collect(),
            b: (0..m.rows()).map(|i| left(i, 1)).collect(),
            c: m.row(rows[0]).to_vec(),
            d: m.row(rows[1]).to_vec(),
        })
    }

    /// Factor a rank-one matrix as a dyad.
    pub fn dyad_from_matrix(m: &QuadMatrix) -> Result<Self> {
        let (rows, cols) = nonsingular_block(m);
        if rows.len() != 1 {
            return Err(Error::WitnessInvalid(format!("witness has rank {}, expected 1", rows.len())));
        }
        let (i0, j0) = (rows[0], cols[0]);
        let pivot = m.get(i0, j0).clone();
        Ok(Rank2Witness::dyad(
            (0..m.rows()).map(|i| m.get(i, j0) / &pivot).collect(),
            m.row(i0).to_vec(),
        ))
    }
}

/// Last one or two columns as combinations of the others.
///
/// With two dependent columns, `matrix[:, q-2] = Σ coeffs_b[j] matrix[:, j]`
/// and `matrix[:, q-1] = Σ coeffs_c[j] matrix[:, j]` over `j < q-2`. With
/// one, `coeffs_b` is empty and `coeffs_c` runs over `j < q-1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ColumnDepWitness {
    pub matrix: QuadMatrix,
    pub coeffs_b: Vec<QuadExt>,
    pub coeffs_c: Vec<QuadExt>,
}

impl ColumnDepWitness {
    pub fn dependent_columns(&self) -> usize {
        if self.coeffs_b.is_empty() && self.coeffs_c.len() + 1 == self.matrix.cols() {
            1
        } else {
            2
        }
    }

    /// Exact check of the column relations.
    pub fn relations_hold(&self) -> bool {
        let (p, q) = self.matrix.shape();
        let k = self.dependent_columns();
        let base = q.saturating_sub(k);
        let check = |coeffs: &[QuadExt], col: usize| {
            coeffs.len() == base
                && (0..p).all(|i| {
                    let s = (0..base).fold(QuadExt::zero(), |acc, j| acc + self.matrix.get(i, j) * &coeffs[j]);
                    &s == self.matrix.get(i, col)
                })
        };
        match k {
            1 => q >= 1 && check(&self.coeffs_c, q - 1),
            _ => q >= 2 && check(&self.coeffs_b, q - 2) && check(&self.coeffs_c, q - 1),
        }
    }

    /// Column relations read off a kernel basis of `m`, with the dependent
    /// columns moved last. Returns the witness and the column order used.
    pub fn from_matrix(m: &QuadMatrix, dependent: usize) -> Result<(Self, Vec<usize>)> {
        let q = m.cols();
        let kernel = kernel_basis(m);
        let pivots = rref(m).1;
        if kernel.len() < dependent || dependent == 0 || dependent > 2 || q < dependent {
            return Err(Error::WitnessInvalid(format!(
                "witness has corank {}, need at least {dependent}",
                kernel.len()
            )));
        }
        // Each kernel vector is supported on one non-pivot column and the
        // pivot columns, so the last non-pivot columns depend on the rest.
        let mut dep: Vec<(usize, Vec<QuadExt>)> = kernel
            .into_iter()
            .zip((0..q).filter(|j| !pivots.contains(j)))
            .map(|(v, t)| (t, v))
            .collect();
        let dep: Vec<(usize, Vec<QuadExt>)> = dep.split_off(dep.len() - dependent);
        let used: Vec<usize> = dep.iter().map(|(t, _)| *t).collect();
        let base: Vec<usize> = (0..q).filter(|j| !used.contains(j)).collect();
        let mut order = base.clone();
        order.extend(dep.iter().map(|(t, _)| *t));
        let coeffs = |t: usize, v: &Vec<QuadExt>| -> Vec<QuadExt> {
            base.iter().map(|&j| -(&v[j] / &v[t])).collect()
        };
        let matrix = m.permute_cols(&order);
        let w = match dependent {
            1 => ColumnDepWitness { matrix, coeffs_b: Vec::new(), coeffs_c: coeffs(dep[0].0, &dep[0].1) },
            _ => ColumnDepWitness {
                matrix,
                coeffs_b: coeffs(dep[0].0, &dep[0].1),
                coeffs_c: coeffs(dep[1].0, &dep[1].1),
            },
        };
        debug_assert!(w.relations_hold());
        Ok((w, order))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    Matrix(QuadMatrix),
    Rank2(Rank2Witness),
    ColumnDep(ColumnDepWitness),
}

impl Witness {
    pub fn matrix(&self) -> QuadMatrix {
        match self {
            Witness::Matrix(m) => m.clone(),
            Witness::Rank2(w) => w.matrix(),
            Witness::ColumnDep(w) => w.matrix.clone(),
        }
    }
}

/// Shape, containment and single-field checks shared by every operation.
fn check_witness(alpha: &IntervalMatrix, w: &QuadMatrix) -> Result<()> {
    if alpha.shape() != w.shape() {
        return Err(Error::WitnessInvalid(format!(
            "witness is {}x{}, interval matrix is {}x{}",
            w.rows(),
            w.cols(),
            alpha.rows(),
            alpha.cols()
        )));
    }
    w.radicand().map_err(|e| Error::WitnessInvalid(e.to_string()))?;
    if !alpha.contains(w)? {
        return Err(Error::WitnessInvalid("witness is not contained in the interval matrix".into()));
    }
    Ok(())
}

fn require_tall(alpha: &IntervalMatrix) -> Result<()> {
    if alpha.rows() < alpha.cols() {
        return Err(Error::WitnessInvalid(format!(
            "construction needs p >= q, got {}x{}",
            alpha.rows(),
            alpha.cols()
        )));
    }
    Ok(())
}

/// Entries where the witness sits on an endpoint become degenerate.
fn pin_boundaries(alpha: &IntervalMatrix, w: &QuadMatrix) -> IntervalMatrix {
    Matrix::from_fn(alpha.rows(), alpha.cols(), |i, j| {
        let iv = alpha.get(i, j);
        match w.get(i, j).to_rational() {
            Some(r) if !iv.is_degenerate() && (&r == iv.lo() || &r == iv.hi()) => RatInterval::point(r),
            _ => iv.clone(),
        }
    })
}

/// Final soundness gate for every construction.
fn certify(
    alpha: &IntervalMatrix,
    m: RationalMatrix,
    target: usize,
    mode: Mode,
    branches: BTreeSet<Branch>,
) -> Result<RealizationResult> {
    if !alpha.contains(&m)? {
        return Err(Error::ConstructionFailed("output leaves the interval matrix".into()));
    }
    if !alpha.degenerate_exact(&m) {
        return Err(Error::ConstructionFailed("output misses a degenerate entry".into()));
    }
    let r = rank(&m);
    let ok = match mode {
        Mode::Exact => r == target,
        Mode::AtMost => r <= target,
    };
    if !ok {
        return Err(Error::ConstructionFailed(format!("output has rank {r}, target {mode} {target}")));
    }
    Ok(RealizationResult { matrix: m, target_rank: target, mode, branches })
}

/// A rational witness inside `alpha` of the right rank is its own answer.
fn rational_shortcut(alpha: &IntervalMatrix, w: &QuadMatrix, target: usize, mode: Mode) -> Option<RealizationResult> {
    let m = w.to_rational()?;
    certify(alpha, m, target, mode, BTreeSet::from([Branch::RationalWitness])).ok()
}

/// Realize rank `r` from any witness form appropriate for `r`.
///
/// Supported ranks are `0, 1, 2, q-2, q-1, q`; intermediate ranks are
/// rejected because a rational realization need not exist for them.
pub fn realize(alpha: &IntervalMatrix, witness: &Witness, r: usize, mode: Mode) -> Result<RealizationResult> {
    let q = alpha.cols();
    let supported = r == 0 || r == 1 || r == 2 || r == q || r + 1 == q || r + 2 == q;
    if !supported || r > q {
        return Err(Error::UnsupportedRank {
            rank: r,
            cols: q,
            reason: unsupported_reason(),
        });
    }
    if r == 0 {
        return realize_rank0(alpha);
    }
    if r == q {
        return realize_full_rank(alpha, &witness.matrix());
    }
    if r == 1 {
        let w = match witness {
            Witness::Rank2(w) => w.clone(),
            other => Rank2Witness::dyad_from_matrix(&other.matrix())?,
        };
        return realize_rank1(alpha, &w);
    }
    if r == 2 {
        let w = match witness {
            Witness::Rank2(w) => w.clone(),
            other => Rank2Witness::from_matrix(&other.matrix())?,
        };
        return realize_rank2(alpha, &w);
    }
    let dependent = q - r;
    if mode == Mode::Exact {
        return realize_rank_exact(alpha, &witness.matrix(), r);
    }
    let (w, order) = match witness {
        Witness::ColumnDep(w) if w.dependent_columns() == dependent => (w.clone(), (0..q).collect()),
        other => ColumnDepWitness::from_matrix(&other.matrix(), dependent)?,
    };
    let permuted = alpha.permute_cols(&order);
    let res = if dependent == 1 {
        realize_rank_le_qm1(&permuted, &w)?
    } else {
        realize_rank_le_qm2(&permuted, &w)?
    };
    let mut inverse = vec![0; q];
    for (k, &j) in order.iter().enumerate() {
        inverse[j] = k;
    }
    certify(alpha, res.matrix.permute_cols(&inverse), r, mode, res.branches)
}

/// Explanation attached to rejected ranks.
pub fn unsupported_reason() -> String {
    "only ranks 0, 1, 2, q-2, q-1 and q are guaranteed to have rational realizations; \
     for intermediate ranks there are sign-pattern interval matrices (already at size 12x12 \
     with rank 3) that contain a real matrix of that rank but no rational one"
        .to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{int, QuadExt};

    fn permuted_order_check(order: &[usize]) -> bool {
        let mut s = order.to_vec();
        s.sort_unstable();
        s.iter().enumerate().all(|(k, &v)| k == v)
    }

    fn q(x: i64) -> QuadExt {
        QuadExt::from_rational(int(x))
    }

    #[test]
    fn rank2_factorization() {
        let s = QuadExt::sqrt(2).unwrap();
        let w = Rank2Witness {
            a: vec![q(1), s.clone(), q(0)],
            b: vec![q(0), q(1), q(1)],
            c: vec![q(1), q(1), q(1)],
            d: vec![s.clone(), q(0), q(1)],
        };
        let m = w.matrix();
        let f = Rank2Witness::from_matrix(&m).unwrap();
        assert_eq!(f.matrix(), m);
        let dy = Rank2Witness::dyad(vec![q(1), s.clone()], vec![s, q(1)]);
        assert_eq!(Rank2Witness::dyad_from_matrix(&dy.matrix()).unwrap().matrix(), dy.matrix());
    }

    #[test]
    fn column_dependence() {
        let s = QuadExt::sqrt(2).unwrap();
        let m = Matrix::from_rows(vec![
            vec![q(1), q(2), s.clone(), q(3)],
            vec![q(0), q(1), q(0), q(1)],
            vec![q(2), q(0), &s * &q(2), q(2)],
        ])
        .unwrap();
        let (w, order) = ColumnDepWitness::from_matrix(&m, 2).unwrap();
        assert!(permuted_order_check(&order));
        assert!(w.relations_hold());
        let (w1, _) = ColumnDepWitness::from_matrix(&m, 1).unwrap();
        assert_eq!(w1.dependent_columns(), 1);
        assert!(w1.relations_hold());
    }
}
