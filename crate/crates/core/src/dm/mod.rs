//! Polynomials and quasi-polynomials on rational subspaces: period lattices,
//! exact fitting from sampled values, evaluation and comparison.

pub mod poly;
pub mod qp;

pub use poly::{monomial_value, monomials_up_to, MonomialSerial, Polynomial};
pub use qp::{
    coset_grid, degree_bound, fit_from_samples, fit_quasipolynomial, period_lattice, qp_equals_on, EqualityReport,
    QuasiPolynomial, QuasiPolynomialSerial,
};
