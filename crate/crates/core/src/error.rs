use thiserror::Error;

/// Failures surfaced by the library. Verification failures carry a witness
/// point rendered as text so they can be reported verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vector {index} is zero")]
    ZeroVector { index: usize },
    #[error("the vectors do not span the ambient space (rank {rank} < {dim})")]
    NotSpanning { rank: usize, dim: usize },
    #[error("the list does not generate a pointed cone")]
    NotPointed,
    #[error("vector {index} is orthogonal to the face witness; face is not regular")]
    NotRegular { index: usize },
    #[error("beta is not generic for subspace {subspace}: {reason}")]
    NotGeneric { subspace: usize, reason: GenericityFailure },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("input is rank deficient")]
    RankDeficient,
    #[error("too few sample points to determine the piece on coset {coset}")]
    Underdetermined { coset: String },
    #[error("samples are not a quasi-polynomial of the requested shape (witness {witness})")]
    Inconsistent { witness: String },
    #[error("point {point} does not lie on the carrier subspace")]
    PointOffCarrier { point: String },
    #[error("no transverse functional bounds the convolution")]
    UnboundedConvolution,
    #[error("function is not in F(X): {detail}")]
    MembershipViolation { detail: String },
    #[error("verification failed: {detail}")]
    VerificationFailed { detail: String },
    #[error("pieces disagree between topes {first} and {second}")]
    PiecesDisagree { first: usize, second: usize },
    #[error("guard limit exceeded: {detail}")]
    GuardLimit { detail: String },
    #[error("invalid input: {detail}")]
    Invalid { detail: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenericityFailure {
    /// The projection onto the subspace lies on a hyperplane of the induced arrangement.
    OnHyperplaneInSubspace,
    /// The orthogonal projection is orthogonal to some vector outside the subspace.
    OrthogonalToSomeVector,
}

impl std::fmt::Display for GenericityFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GenericityFailure::OnHyperplaneInSubspace => f.write_str("on-hyperplane-in-r"),
            GenericityFailure::OrthogonalToSomeVector => f.write_str("orthogonal-to-some-a"),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
