//! Lattice functions `Z^d → Q`, difference operators, partition functions,
//! the cone-supported kernels `P^F` and their convolutions, and the
//! membership tests for `F(X)` and `DM(X)`.

pub mod function;
pub mod membership;
pub mod ops;

pub use function::{
    constant, delta0, extend_from_subspace, indicator, restrict_to_subspace, zero_function, ConeSupport,
    LatticeFunction,
};
pub use membership::{check_dm_membership, check_fx_membership, MembershipReport, Violation, Window};
pub use ops::{
    convolve, convolve_cone, difference_stencil, kernel_pf, nabla, nabla_list, partition_function,
    partition_function_list, signed_list, ConvolutionValue, Convolver,
};
