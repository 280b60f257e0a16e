use thiserror::Error;

/// Errors raised by library operations. Verification failures are not
/// errors; they are reported through the various report structs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("scalar shape mismatch: (N={n1}, m={m1}) vs (N={n2}, m={m2})")]
    ShapeMismatch {
        n1: u64,
        m1: usize,
        n2: u64,
        m2: usize,
    },

    #[error("elements belong to different algebras")]
    SpecMismatch,

    #[error("matrix is not unimodular")]
    NotUnimodular,

    #[error("divisor is not a unit of the coefficient ring")]
    NotUnit,

    #[error("sublattice is not contained in the target lattice")]
    NotContained,

    #[error("sublattice is not saturated (quotient has torsion)")]
    NotSaturated,

    #[error("integer value does not fit in 64 bits")]
    Overflow,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no solution found up to s = {bound}")]
    NoSolution { bound: u64 },

    #[error("invalid input at `{path}`: {message}")]
    Parse { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
