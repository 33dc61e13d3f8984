use thiserror::Error;

/// Everything that can go wrong inside the workbench.
///
/// Variants are grouped by how a caller should react: bad input, an
/// exhausted search budget, or a broken internal invariant (always a bug).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // -- input errors -------------------------------------------------------
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} is outside the supported range (2 < p < 2^31)")]
    PrimeOutOfRange(u64),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("polynomial is not homogeneous (found degrees {0} and {1})")]
    NonHomogeneous(u32, u32),
    #[error("unknown variable x{index} (only x0..x{max} are available)")]
    UnknownVariable { index: usize, max: usize },
    #[error("polynomial is zero and no degree was supplied")]
    ZeroPolynomial,
    #[error("substitution images have different degrees ({0} and {1})")]
    DegreeMismatch(u32, u32),
    #[error("characteristic {p} must exceed the degree {d}")]
    CharacteristicTooSmall { p: u64, d: u32 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("rows do not span a subspace of the stated dimension")]
    DegenerateBasis,
    #[error("point does not lie on the hypersurface")]
    PointNotOnX,
    #[error("the chosen coordinate vanishes at the center")]
    CoordinateVanishesAtCenter,
    #[error("the center plane is not contained in the hypersurface")]
    PlaneNotInX,
    #[error("the fiber point is not a common zero of the local equations")]
    NotAFanoPoint,
    #[error("multiset index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("curve does not lie on the hypersurface")]
    CurveNotOnX,
    #[error("twist {twist} on P^1 is below the Euler-sequence window (needs >= -1)")]
    TwistOutOfWindow { twist: i64 },
    #[error("the (k+1)-plane lies inside the hypersurface; residual is undefined")]
    PhiInsideX,
    #[error("planes are not nested: {0}")]
    NotNested(String),
    #[error("degree-1 hypersurface has an empty residual")]
    DegreeZeroResidual,
    #[error("point does not lie on the quadric")]
    PointNotOnQ,
    #[error("point is a singular point of the quadric")]
    PointSingular,
    #[error("degree {0} requires the large-value gate")]
    GatedDegree(u32),
    #[error("h0 table does not come from a splitting type: {0}")]
    InconsistentSplitting(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    // -- budget errors ------------------------------------------------------
    #[error("search space of {size} exceeds budget {budget}")]
    SearchSpaceTooLarge { size: u128, budget: u128 },
    #[error("no smooth member found after {attempts} attempts")]
    SmoothnessNotAchieved { attempts: usize },
    #[error("no downward basis found after {retries} center resamples (seeds {seeds:?})")]
    DownwardSetNotFound { retries: usize, seeds: Vec<u64> },
    #[error("retry budget exhausted: {0}")]
    RetryBudgetExhausted(String),

    // -- invariant violations -----------------------------------------------
    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// Coarse classification used by the command-line front end for exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Budget,
    Internal,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::SearchSpaceTooLarge { .. }
            | Error::SmoothnessNotAchieved { .. }
            | Error::DownwardSetNotFound { .. }
            | Error::RetryBudgetExhausted(_) => ErrorClass::Budget,
            Error::Invariant(_) => ErrorClass::Internal,
            _ => ErrorClass::Input,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
