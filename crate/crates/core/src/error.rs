use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field mismatch: element of Q(sqrt({element})) used with Q(sqrt({expected}))")]
    FieldMismatch { element: i64, expected: i64 },

    #[error("{0} is not squarefree")]
    NotSquarefree(i64),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),

    #[error("character of discriminant {0} is not primitive")]
    NotPrimitive(i64),

    #[error("invalid weight {weight}: {reason}")]
    InvalidWeight { weight: i64, reason: &'static str },

    #[error("weight mismatch: {0} vs {1}")]
    WeightMismatch(u32, u32),

    #[error("precision shortfall: need {needed}, have {have}")]
    PrecisionShortfall { needed: u64, have: u64 },

    #[error("precision mismatch: {0} vs {1}")]
    PrecisionMismatch(u32, u32),

    #[error("Hecke field of degree {0} is not supported (degree <= 2 only)")]
    UnsupportedHeckeField(usize),

    #[error("linear dependence among {0} generators at this precision; raise precision")]
    LinearDependence(usize),

    #[error("expected a cusp form")]
    NotCusp,

    #[error("support violation at index {0}")]
    SupportViolation(u64),

    #[error("eigenvalue collision: {0}")]
    EigenvalueCollision(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("no coefficient usable for normalization: {0}")]
    NoUnitCoefficient(String),

    #[error("form is not integral at the prime: {0}")]
    NotIntegral(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("zero coefficient c_g(|D|) for D = {0}")]
    ZeroCoefficient(i64),

    #[error("rational reconstruction failed: {0}")]
    ReconstructionFailed(String),

    #[error("functional equation self-test failed: {0}")]
    FunctionalEquation(String),

    #[error("parse error: {0}")]
    Parse(String),
}
