use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    InvalidPrime(u64),
    #[error("{value} is not a {p}-adic integer (denominator divisible by {p})")]
    NotPAdicInteger { value: String, p: u64 },
    #[error("precision mismatch: {0}")]
    PrecisionMismatch(String),
    #[error("{0} is not a unit")]
    NotAUnit(String),
    #[error("series diverges: |y|_p = {0} is not below 1")]
    DivergentSeries(String),
    #[error("invalid residue: {0}")]
    InvalidResidue(String),
    #[error("radix mismatch")]
    RadixMismatch,
    #[error("invalid radix: {0}")]
    InvalidRadix(String),
    #[error("invalid scale sequence: {0}")]
    InvalidScales(String),
    #[error("radix comparison refuted at level {level}: prime {prime} divides R_{level} but never the other radix")]
    NotComparableRefuted { level: usize, prime: u64 },
    #[error("radix comparison undecided at level {level}: no witness within search depth {bound}")]
    NotComparableExhausted { level: usize, bound: usize },
    #[error("Hensel precondition failed: {0}")]
    HenselPreconditionFailed(String),
    #[error("derivative scale mismatch: expected |f'(x0)|_p = p^-{expected}, found {found}")]
    KMismatch { expected: u32, found: String },
    #[error("decay witness invalid: {0}")]
    DecayWitnessInvalid(String),
    #[error("target cylinders overlap: {0}")]
    OverlappingCylinders(String),
    #[error("dimension estimate not settled at depth {depth}: spread {spread}")]
    DepthInsufficient { depth: usize, spread: String },
    #[error("scale sequence mismatch: {0}")]
    ScaleMismatch(String),
    #[error("invalid gauge: {0}")]
    InvalidGauge(String),
    #[error("scale grids differ")]
    GridMismatch,
    #[error("set is empty")]
    EmptySet,
    #[error("degenerate measure: {0}")]
    DegenerateMeasure(String),
    #[error("function takes a negative value at index {0}")]
    NotNonnegative(usize),
    #[error("exponent out of range: {0}")]
    ExponentOutOfRange(String),
    #[error("degenerate partition: {0}")]
    DegeneratePartition(String),
    #[error("invalid product spec: {0}")]
    InvalidSpec(String),
    #[error("size {size} exceeds cap {cap}")]
    OverCap { size: usize, cap: usize },
    #[error("parse error: {0}")]
    Parse(String),
}
