use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("denominator series has zero constant term")]
    DivisionByNonUnit,
    #[error("series is identically zero on its known coefficients")]
    ZeroSeries,
    #[error("sign condition violated: {0}")]
    SignError(String),
    #[error("polynomial degree {degree} exceeds {bound}")]
    DegreeError { degree: usize, bound: usize },
    #[error("coefficient {needed} requested but series is only known to order {known}")]
    InsufficientOrder { needed: usize, known: usize },
    #[error("invalid minor index: {0}")]
    IndexError(String),
    #[error("argument out of domain: {0}")]
    DomainError(String),
    #[error("normalization violated: {0}")]
    NormalizationError(String),
    #[error("recurrence stopped at step {index} before reaching the requested minor")]
    ChainTooShort { index: usize },
    #[error("fraction determines coefficients only to order {determined}, requested {requested}")]
    InsufficientDepth { requested: usize, determined: usize },
    #[error("depth {requested} exceeds the {available} available terms")]
    DepthError { requested: usize, available: usize },
    #[error("continued fraction evaluation hit a pole at depth {depth}")]
    EvaluationPole { depth: usize },
    #[error("polynomials share a nonconstant factor of degree {degree}")]
    CoprimeError { degree: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
