//! Exact vector partition functions and the decomposition theory of the
//! space F(X) of lattice functions attached to a list of integer vectors.
//!
//! - [`exactlin`]: integer/rational linear algebra, Hermite normal form, exact LP
//! - [`arrangement`]: rational subspaces, cocircuits, topes, walls, big cells, faces
//! - [`latfun`]: lattice functions, difference operators, partition functions and kernels
//! - [`dm`]: polynomials and quasi-polynomials, period lattices, exact fitting
//! - [`decomp`]: staged F-decomposition, projectors, localization, wall crossing, Paradan
//! - [`spline`]: exact multivariate spline evaluation and its polynomial pieces
//! - [`cli`]: problem files, reports and command dispatch for the `vecpart` binary

pub mod arrangement;
pub mod cli;
pub mod decomp;
pub mod dm;
pub mod error;
pub mod exactlin;
pub mod latfun;
pub mod spline;

pub use error::{Error, Result};
