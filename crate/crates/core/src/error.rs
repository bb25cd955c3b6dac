use thiserror::Error;

/// Errors raised by the library. Variants are grouped by the layer that raises them.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    // series ring
    #[error("constant term vanishes")]
    ZeroConstantTerm,
    #[error("series has no invertible leading monomial")]
    NotInvertible,
    #[error("series has no square root in the ring")]
    NotASquare,
    #[error("half-integer t-exponent in integer-calculus mode")]
    HalfIntegerDifferentiation,
    #[error("monomial of doubled grade {grade2} lies beyond truncation order {order2}/2")]
    BeyondTruncation { grade2: i64, order2: i64 },
    #[error("logarithm of a non-unit: {0}")]
    LogOfNonUnit(String),
    #[error("ln t marker did not cancel (coefficient {0})")]
    LogMarkerNotCancelled(String),
    #[error("expansion of an exact series does not terminate")]
    UnboundedExpansion,
    #[error("expected a genuine power series, found negative t-exponent in {0}")]
    NotAPowerSeries(String),
    #[error("malformed series data: {0}")]
    Malformed(String),

    // polynomials
    #[error("index out of range: {0}")]
    InvalidRange(String),
    #[error("insufficient derivative orders: need {need}, have {have}")]
    InsufficientOrders { need: usize, have: usize },
    #[error("parity combination not covered by discrete integration")]
    ParityMismatch,
    #[error("Euler characteristic requested outside 2 - 2g - n < 0 (g = {g}, n = {n})")]
    OutOfRange { g: u32, n: u32 },
    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),
    #[error("data is not quasi-polynomial: {0}")]
    NotQuasiPolynomial(String),

    // disk and tables
    #[error("fixed point not reached after {0} sweeps")]
    NonConvergence(usize),
    #[error("invalid index: {0}")]
    InvalidIndex(String),
    #[error("length {len} exceeds matrix size {lmax}")]
    IndexBeyondLmax { len: u32, lmax: u32 },
    #[error("missing table entry {0:?}")]
    MissingDependency(Vec<u32>),
    #[error("face weight t_{0} is not active but the operator differentiates in it")]
    MissingWeight(u32),

    // closed forms
    #[error("assumption violated: {0}")]
    AssumptionViolated(String),
    #[error("unsupported case: {0}")]
    UnsupportedCase(String),
    #[error("weight specification is not bipartite")]
    NonBipartiteWeights,
    #[error("truncation order too low: {0}")]
    InsufficientOrder(String),

    // insertion
    #[error("no base case for genus {0}")]
    UnsupportedGenus(u32),

    // moments
    #[error("moment routes disagree at h = {0}")]
    MomentMismatch(u32),
    #[error("differential is singular")]
    SingularDifferential,

    // census
    #[error("census scale exceeded: {0} edges")]
    ScaleExceeded(u32),
    #[error("raw count {count} not divisible by {divisor}")]
    Indivisible { count: String, divisor: String },
}

pub type Result<T> = std::result::Result<T, Error>;
