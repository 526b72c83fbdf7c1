use thiserror::Error;

/// Errors raised by the computational modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid Lie type {0}")]
    InvalidLieType(String),
    #[error("rank {rank} exceeds the configured cap {cap}")]
    UnsupportedRank { rank: usize, cap: usize },
    #[error("level must be a positive integer")]
    InvalidLevel,
    #[error("Weyl group exceeds the configured cap of {cap} elements")]
    GroupTooLarge { cap: usize },
    #[error("weight {0:?} is not integrable at this level")]
    WeightNotIntegrable(Vec<u32>),
    #[error("S-matrix normalization failed: {0}")]
    NormalizationFailure(String),
    #[error("fusion coefficient N[{i}][{j}][{k}] = {value} is not within tolerance of an integer")]
    NonIntegerFusion { i: usize, j: usize, k: usize, value: f64 },
    #[error("fusion coefficient N[{i}][{j}][{k}] rounds to the negative value {value}")]
    NegativeFusion { i: usize, j: usize, k: usize, value: i64 },
    #[error("S^2 is not a permutation matrix (row {0})")]
    NotAPermutation(usize),
    #[error("simple currents are not closed under fusion: {0}")]
    ClosureFailure(String),
    #[error("quadratic form violated for pair ({g}, {h}): {detail}")]
    QuadraticFormViolation { g: usize, h: usize, detail: String },
    #[error("no diagram automorphism catalogued for this current in series {0}")]
    UnsupportedSeries(String),
    #[error("partition function entry Z[{i}][{j}] is not a non-negative integer")]
    NonIntegerEntry { i: usize, j: usize },
    #[error("modular invariance violated: {0}")]
    InvarianceViolation(String),
    #[error("phi table has no values for orbit representative {0} with a non-cyclic stabilizer")]
    PhiUnavailable(usize),
    #[error("epsilon form at {0} is not an alternating bicharacter")]
    InvalidEpsilon(usize),
    #[error("support acts with fixed points on weights {0:?}")]
    FixedPointsPresent(Vec<usize>),
    #[error("dual of bimodule class ({object}, {character}) fails the unit-multiplicity test")]
    DualityValidationFailure { object: usize, character: usize },
    #[error("folding not supported: {0}")]
    UnsupportedFolding(String),
    #[error("phi ratio depends on the reference weight (spread {spread:e}) at fixed point {fixed_point}")]
    LambdaDependence { fixed_point: usize, spread: f64 },
    #[error("phase {phase} is not a root of unity of order dividing {exponent}")]
    SnapFailure { phase: f64, exponent: u64 },
    #[error("malformed document: {0}")]
    Malformed(String),
}

impl Error {
    /// True for errors caused by the request itself rather than by a failed
    /// mathematical check.
    pub fn is_user_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidLieType(_)
                | Error::UnsupportedRank { .. }
                | Error::InvalidLevel
                | Error::GroupTooLarge { .. }
                | Error::WeightNotIntegrable(_)
                | Error::UnsupportedSeries(_)
                | Error::PhiUnavailable(_)
                | Error::FixedPointsPresent(_)
                | Error::UnsupportedFolding(_)
                | Error::Malformed(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
