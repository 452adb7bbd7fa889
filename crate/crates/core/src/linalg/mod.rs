//! Exact linear algebra over the rationals and a quadratic field.

pub mod approx;
pub mod elim;
pub mod kernel;
pub mod lp;
pub mod matrix;
pub mod solve;

pub use approx::{best_convergent, precision_budget, rational_solution_near, round_into};
pub use elim::{det, field_rank, kernel_basis, nonsingular_block, rank, rref};
pub use kernel::{kernel_generators, KernelVariant};
pub use lp::{lp_feasible, Inequality};
pub use matrix::{Matrix, QuadMatrix, RationalMatrix, Scalar};
pub use solve::{solve, AffineSolution, LinearSystem, Solution};
