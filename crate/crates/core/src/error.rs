use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("gcd(0,0) undefined")]
    GcdOfZeros,
    #[error("valuation of zero")]
    ValuationOfZero,
    #[error("division by zero")]
    DivisionByZero,
    #[error("content of the zero polynomial")]
    ContentOfZero,
    #[error("variable lists differ: {left:?} vs {right:?}")]
    VariableMismatch { left: Vec<String>, right: Vec<String> },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("no value assigned to variable `{0}`")]
    MissingAssignment(String),
    #[error("coefficient {0} is not integral for this reduction")]
    NonIntegral(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),
    #[error("expected {expected} convention, got {found}")]
    ConventionMismatch { expected: String, found: String },
    #[error("operation requires m = {expected}, got m = {found}")]
    WrongDimension { expected: usize, found: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("polynomial is not in R: term {0} has x-degree not divisible by m+1")]
    NotInR(String),
    #[error("precondition: f(b) nonsingular")]
    Singular,
    #[error("smoothness undecidable for m = {0}; pass an explicit smoothness assertion")]
    SmoothnessUnknown(usize),
    #[error("matrix would have {rows} rows, above the configured limit {limit}")]
    MatrixTooLarge { rows: usize, limit: usize },
    #[error("operator is zero")]
    ZeroOperator,
    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(String),
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

impl Error {
    /// Stable identifier for machine-readable error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::GcdOfZeros => "gcd_of_zeros",
            Error::ValuationOfZero => "valuation_of_zero",
            Error::DivisionByZero => "division_by_zero",
            Error::ContentOfZero => "content_of_zero",
            Error::VariableMismatch { .. } => "variable_mismatch",
            Error::UnknownVariable(_) => "unknown_variable",
            Error::MissingAssignment(_) => "missing_assignment",
            Error::NonIntegral(_) => "non_integral",
            Error::Parse(_) => "parse",
            Error::InvalidExponent(_) => "invalid_exponent",
            Error::ConventionMismatch { .. } => "convention_mismatch",
            Error::WrongDimension { .. } => "wrong_dimension",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::NotInR(_) => "not_in_r",
            Error::Singular => "singular",
            Error::SmoothnessUnknown(_) => "smoothness_unknown",
            Error::MatrixTooLarge { .. } => "matrix_too_large",
            Error::ZeroOperator => "zero_operator",
            Error::NotUnimodular(_) => "not_unimodular",
            Error::Json(_) => "json",
        }
    }
}
