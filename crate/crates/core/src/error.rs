use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("base {0} is not supported (need 2 <= k <= 10)")]
    InvalidBase(u8),

    #[error("digit {digit} is out of range for base {base}")]
    DigitOutOfRange { digit: u8, base: u8 },

    #[error("pattern {0:?} consists of zeros only and has no well-defined count")]
    AllZeroPattern(String),

    #[error("operands use different bases ({0} and {1})")]
    MixedBase(u8, u8),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("length {requested} is smaller than the longest pattern ({longest})")]
    LengthTooSmall { requested: usize, longest: usize },

    #[error("not a pattern-counting sequence of length {0}")]
    NotPatternCounting(usize),

    #[error("pattern set is not self-invariant (has a trailing zero after normalization)")]
    NotSelfInvariant,

    #[error("condition is undefined for length {0} (need length >= 2)")]
    LengthTooShort(usize),

    #[error("pattern set does not satisfy the saturation condition")]
    NotSaturated,

    #[error("{0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("matrix is not a normalized Hadamard matrix: {0}")]
    NotHadamard(String),

    #[error("invalid periodic factor: {0}")]
    InvalidPeriodicFactor(String),

    #[error("shift must be at least 1 (gamma(0) = 1 by definition)")]
    ZeroShift,

    #[error("census is only supported in base 2 (got {0})")]
    CensusBase(u8),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}
