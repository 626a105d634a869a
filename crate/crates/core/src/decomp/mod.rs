//! Decomposition of functions in `F(X)`: the staged algorithm and its
//! projectors, localization to a tope, wall crossing, big-cell pieces and
//! Paradan's decomposition of the partition function.

pub mod engine;
pub mod local;

pub use engine::{
    decompose_unchecked, f_decomposition, projector, require_fx, verify_decomposition, CheckOutcome, Component,
    Decomposition, VerificationReport,
};
pub use local::{
    bigcell_piece, localize, localize_partition_function_at, localize_with, paradan_decomposition, region_points,
    tope_containing, wall_crossing, Localization, WallCrossing, WallCrossingReport,
};
