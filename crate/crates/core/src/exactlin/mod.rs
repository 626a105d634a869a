//! Exact integer and rational linear algebra: vectors, matrices, Hermite
//! normal form, sublattices, rational solving and an exact LP oracle.

pub mod lattice;
pub mod lp;
pub mod matrix;
pub mod solve;
pub mod vector;

pub use lattice::{lattice_intersection, Sublattice};
pub use lp::{LinearProgram, LpOutcome, Relation};
pub use matrix::{determinant, hermite_normal_form, integer_kernel, IntMatrix};
pub use solve::{solve_rational, Solution};
pub use vector::{int_rat, rat, sign_of, IntVector, RatVector};

pub use num::{BigInt, BigRational};
