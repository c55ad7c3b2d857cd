use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("modulus must have {expected} coefficients (degree {degree}), got {got}")]
    DegreeMismatch { degree: u32, expected: usize, got: usize },
    #[error("modulus is not monic")]
    NotMonic,
    #[error("modulus coefficient {0} is out of range for the prime field")]
    CoefficientOutOfRange(u32),
    #[error("modulus is reducible over GF(p)")]
    ReducibleModulus,
    #[error("field order {order} exceeds the supported cap {cap}")]
    FieldTooLarge { order: u64, cap: u64 },
    #[error("unsupported field order q = {0}: q must be an odd prime power")]
    UnsupportedField(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("all homogeneous coordinates are zero")]
    ZeroVector,
    #[error("arguments must be distinct")]
    EqualArguments,
    #[error("matrix is singular")]
    Singular,
    #[error("quadratic form is degenerate or does not define an irreducible conic")]
    DegenerateConic,
    #[error("line passes through Y_inf and is tangent to no pencil conic at an affine point")]
    LineThroughYInfinity,
    #[error("pencil indices must differ")]
    EqualIndices,
    #[error("operation requires q = 3 (mod 4), got q = {0}")]
    WrongCongruenceClass(u64),
    #[error("pencil index is not a non-square")]
    NotInternalIndex,
    #[error("point is not external to the conic")]
    NotExternalPoint,
    #[error("point is not on the conic")]
    NotOnConic,
    #[error("q = {0} is not a square")]
    NotASquare(u64),
    #[error("line set is not an exact partition of size q")]
    NotAPartition,
    #[error("line id {0} is out of range")]
    InvalidLineId(u32),
    #[error("line id {0} occurs more than once")]
    DuplicateLine(u32),
    #[error("node budget of {0} exceeded")]
    InstanceTooLarge(u64),
    #[error("cover mode needs a size bound")]
    MissingSize,
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
