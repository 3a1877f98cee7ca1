use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("matrix is singular")]
    Singular,
    #[error("zero input")]
    ZeroInput,
    #[error("trivector does not represent a null 3-space")]
    NotNull3Space,
    #[error("trivector is not a point")]
    NotAPoint,
    #[error("trivector is not a plane")]
    NotAPlane,
    #[error("matrix is not a linear regularity (B^T J B != +-kJ)")]
    NotRegular,
    #[error("regularity lies in a component with no 4x4 pre-image")]
    BranchUnliftable,
    #[error("bad axis: direction must be nonzero and orthogonal to the point")]
    BadAxis,
    #[error("matrix is not a rotation")]
    NotARotation,
    #[error("plane normal must be a unit vector")]
    BadNormal,
    #[error("vector factor ({0}) is not invertible")]
    NotInvertible(usize),
    #[error("the two vectors span less than a plane")]
    Degenerate,
    #[error("screws belong to different algebras: {0} and {1}")]
    AlgebraMismatch(&'static str, &'static str),
    #[error("algebra {0} has no quadratic-form trivector")]
    NoTrivector(&'static str),
    #[error("matrix is not traceless")]
    NotTraceless,
    #[error("unknown shear family {0}")]
    UnknownFamily(String),
    #[error("expected a pure grade-{0} multivector")]
    WrongGrade(usize),
    #[error("exponential series did not converge")]
    NonConvergence,
    #[error("parallel axes")]
    ParallelAxes,
    #[error("bad blade label {0:?}")]
    BadLabel(String),
    #[error("unknown algebra {0:?}")]
    UnknownAlgebra(String),
}

pub type Result<T> = std::result::Result<T, Error>;
