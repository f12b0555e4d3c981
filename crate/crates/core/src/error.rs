use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field size {p}^{s} does not fit below 2^63")]
    Overflow { p: u64, s: u32 },
    #[error("element or polynomial belongs to a different field")]
    CtxMismatch,
    #[error("zero has no discrete logarithm")]
    ZeroElement,
    #[error("field of size {size} exceeds the enumeration cap {cap}")]
    FieldTooLarge { size: u128, cap: u128 },
    #[error("division by the zero polynomial")]
    DivByZeroPoly,
    #[error("operation undefined for the zero polynomial")]
    ZeroPoly,
    #[error("derivative degree drops: characteristic divides the degree")]
    DegenerateDerivative,
    #[error("norm fiber over zero requested")]
    ZeroMu,
    #[error("elements do not form a basis of the extension")]
    NotABasis,
    #[error("polynomial is not invariant: {0}")]
    NotInvariant(String),
    #[error("series precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("no root of the required order in the base field")]
    NoRootInField,
    #[error("characteristic divides {0}")]
    BadCharacteristic(u64),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("Artin-Schreier reduction is constant; no bound applies")]
    DegenerateReduction,
    #[error("polynomial is an m-th power")]
    MthPower,
    #[error("parameters are not in the exceptional cell: {0}")]
    NotExceptionalCell(String),
    #[error("not all roots lie in the base field; only |beta| is known")]
    RootsNotInBaseField,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
