use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("the zero polynomial cannot be normalized")]
    NotNormalizable,
    #[error("{name} must be a positive finite number, got {value}")]
    InvalidParameter { name: &'static str, value: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectrumError {
    #[error("eigenmode index must be at least 1, got {0}")]
    InvalidIndex(u64),
    #[error("coefficient vector has zero norm")]
    ZeroVector,
    #[error("moment order must be 1 or 2, got {0}")]
    InvalidMomentOrder(u32),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("tail of a power-law series with exponent {exponent} diverges")]
    DivergentTail { exponent: f64 },
    #[error("quadrature did not converge within {max_depth} bisections")]
    NoConvergence { max_depth: usize },
    #[error("invalid series argument: {0}")]
    InvalidArgument(&'static str),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExpectationError {
    #[error("state is not in the domain of H: {0}")]
    DomainViolation(String),
    #[error("spectral bracket width {width:e} exceeds tolerance {tol:e}")]
    TruncationTooSmall { width: f64, tol: f64 },
    #[error("boundary identity failed: discrepancy {discrepancy} != boundary term {boundary}")]
    IdentityViolated { discrepancy: String, boundary: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("parse error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("not a polynomial at position {pos}: {message}")]
    NonPolynomial { pos: usize, message: String },
}

/// Any failure surfaced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Expectation(#[from] ExpectationError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
