use thiserror::Error;

pub type Result<T, E = SawError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SawError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unsupported dimension {0} (expected 2..={max})", max = crate::lattice::MAX_DIM)]
    UnsupportedDimension(usize),

    #[error("invalid step: axis {axis}, sign {sign}")]
    InvalidStep { axis: usize, sign: i64 },

    #[error("walk is not self-avoiding")]
    NotSelfAvoiding,

    #[error("walk is not closing")]
    NotClosing,

    #[error("index {0} is not a z-renewal time")]
    NotZRenewal(usize),

    #[error("replacement step equals the current step")]
    SameStep,

    #[error("walk does not start at the endpoint of the reference walk")]
    StartMismatch,

    #[error("hanging time {found} differs from required {expected}")]
    HangMismatch { expected: usize, found: usize },

    #[error("invalid enumeration spec: {0}")]
    InvalidSpec(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("slot index {index} out of range ({count} occurrences)")]
    InvalidSlot { index: usize, count: usize },

    #[error("pattern occurrences overlap at steps {first} and {second}")]
    OverlappingOccurrences { first: usize, second: usize },

    #[error("invalid pattern pair: {0}")]
    InvalidPatternPair(String),

    #[error("multi-valued map has an empty image for domain element {0}")]
    EmptyImage(usize),

    #[error("image of domain element {0} leaves the codomain")]
    ImageOutsideCodomain(usize),

    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    #[error("infeasible size: {0}")]
    Infeasible(String),

    #[error("invalid sampler configuration: {0}")]
    InvalidConfig(String),
}
