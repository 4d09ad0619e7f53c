use thiserror::Error;

/// Errors raised by the exact arithmetic and the lattice routines built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("square root of a negative number: {0}")]
    NegativeRadicand(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("incompatible radicands sqrt({left}) and sqrt({right})")]
    IncompatibleRadicands { left: u64, right: u64 },

    #[error("radicand {0} is not a squarefree integer >= 1")]
    InvalidRadicand(String),

    #[error("squarefree part does not fit in 64 bits: {0}")]
    RadicandTooLarge(String),

    #[error("could not certify the squarefree part of {0} by trial division")]
    FactorizationLimit(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("basis vectors are linearly dependent")]
    DegenerateBasis,

    #[error("operation requires a reduced basis")]
    NotReduced,

    #[error("value is not representable with a single quadratic radicand: {0}")]
    UnsupportedField(String),

    #[error("tau = {0} is not in the fundamental strip 0 <= a <= 1/2, |tau| >= 1")]
    NotInFundamentalRegion(String),

    #[error("imaginary part must be positive, got {0}")]
    NonPositiveImaginary(String),

    #[error("lattice or point is not arithmetic: {0}")]
    NonArithmetic(String),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("slope {slope} is below the arc minimum 2t + sqrt(4t^2 + 1) = {minimum}")]
    SlopeBelowMinimum { slope: String, minimum: String },

    #[error("zero vector has no denominator")]
    ZeroVector,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// Stable variant name, used by the command-line front end.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NegativeRadicand(_) => "NegativeRadicand",
            Error::DivisionByZero => "DivisionByZero",
            Error::IncompatibleRadicands { .. } => "IncompatibleRadicands",
            Error::InvalidRadicand(_) => "InvalidRadicand",
            Error::RadicandTooLarge(_) => "RadicandTooLarge",
            Error::FactorizationLimit(_) => "FactorizationLimit",
            Error::Parse(_) => "Parse",
            Error::DegenerateBasis => "DegenerateBasis",
            Error::NotReduced => "NotReduced",
            Error::UnsupportedField(_) => "UnsupportedField",
            Error::NotInFundamentalRegion(_) => "NotInFundamentalRegion",
            Error::NonPositiveImaginary(_) => "NonPositiveImaginary",
            Error::NonArithmetic(_) => "NonArithmetic",
            Error::Inconsistent(_) => "Inconsistent",
            Error::SlopeBelowMinimum { .. } => "SlopeBelowMinimum",
            Error::ZeroVector => "ZeroVector",
            Error::InvalidParameter(_) => "InvalidParameter",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
