use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite coordinate in point {index}")]
    NonFinite { index: usize },
    #[error("degenerate vector: arm length {norm:e} is below the threshold {threshold:e}")]
    DegenerateVector { norm: f64, threshold: f64 },
    #[error("invalid dimension {0}")]
    InvalidDimension(usize),
    #[error("too few points: need at least {needed}, found {found}")]
    TooFewPoints { needed: usize, found: usize },
    #[error("empty point cloud")]
    EmptyCloud,
    #[error("ratio {0} is outside the admissible interval")]
    InvalidRatio(f64),
    #[error("invalid iterated function system: {0}")]
    InvalidIfs(String),
    #[error("budget exceeded: {requested} requested, budget is {budget}")]
    BudgetExceeded { requested: u128, budget: u128 },
    #[error("address codes are identical")]
    IdenticalCodes,
    #[error("invalid address code: {0}")]
    InvalidCode(String),
    #[error("map index {0} used twice")]
    SameIndex(usize),
    #[error("map index {index} out of range for {maps} maps")]
    InvalidIndex { index: usize, maps: usize },
    #[error("system is not strongly separated (gap {gap:e})")]
    NotSeparated { gap: f64 },
    #[error("fewer than two usable scales in the requested range")]
    DegenerateRange,
    #[error("invalid scales k={k}, l={l}")]
    InvalidScales { k: i32, l: i32 },
    #[error("invalid arity {0}: need r >= 2")]
    InvalidArity(u32),
    #[error("empty angle window")]
    InvalidWindow,
    #[error("no far point: the cloud collapses to a single location")]
    NoFarPoint,
    #[error("grid has no occupied cells")]
    EmptyGrid,
    #[error("invalid delta {delta} for exponent {s}")]
    InvalidDelta { delta: f64, s: f64 },
    #[error("point {index} lies outside the unit cube")]
    OutOfUnitCube { index: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}
