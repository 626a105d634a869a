//! The multivariate spline `T_X` of a pointed list: exact evaluation,
//! polynomial pieces on topes and big cells, and the continuous
//! wall-crossing and derivative identities.

pub mod eval;
pub mod pieces;

pub use eval::{integrate_polynomial, signed_spline, signed_spline_eval, spline_eval, SplineEvaluator};
pub use pieces::{
    continuity_check, derivative_identity_check, fit_poly_piece, min_cocircuit_size, random_tope_points,
    spline_bigcell, spline_wall_crossing, tope_interior_points, vanishes_to_order, ContinuityReport,
    DerivativeReport, PolyPiece, PolyPieceSerial, SplineWallReport,
};
