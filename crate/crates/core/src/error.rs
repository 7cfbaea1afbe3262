use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported residue field F_{p}^{k}")]
    UnsupportedField { p: u32, k: u32 },
    #[error("valuation of zero")]
    ZeroValuation,
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("element lives over the wrong field: {0}")]
    WrongField(String),
    #[error("polynomial is not a square")]
    NotASquare,
    #[error("not integral: {0}")]
    NotIntegral(String),
    #[error("factor profile incomplete: {0}")]
    ProfileIncomplete(String),
    #[error("polynomial is not separable")]
    NotSeparable,
    #[error("generators do not span a full-rank lattice")]
    RankDeficient,
    #[error("lattice is not contained in the reference lattice")]
    NotContained,
    #[error("enumeration window unstable up to M = {0}")]
    WindowUnstable(i64),
    #[error("element is not topologically nilpotent")]
    NotNilpotent,
    #[error("image is not a lattice of the required shape: {0}")]
    NotLattice(String),
    #[error("characteristic polynomial has coefficients outside the base field")]
    CoefficientNotRational,
    #[error("element is not regular semi-simple: {0}")]
    NotRegular(String),
    #[error("determinant is not a unit")]
    NotUnitDeterminant,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::UnsupportedField { .. } => "UNSUPPORTED_FIELD",
            Error::ZeroValuation => "ZERO_VALUATION",
            Error::InsufficientPrecision { .. } => "INSUFFICIENT_PRECISION",
            Error::WrongField { .. } => "WRONG_FIELD",
            Error::NotASquare => "NOT_A_SQUARE",
            Error::NotIntegral { .. } => "NOT_INTEGRAL",
            Error::ProfileIncomplete { .. } => "PROFILE_INCOMPLETE",
            Error::NotSeparable => "NOT_SEPARABLE",
            Error::RankDeficient => "RANK_DEFICIENT",
            Error::NotContained => "NOT_CONTAINED",
            Error::WindowUnstable { .. } => "WINDOW_UNSTABLE",
            Error::NotNilpotent => "NOT_NILPOTENT",
            Error::NotLattice { .. } => "NOT_LATTICE",
            Error::CoefficientNotRational => "COEFFICIENT_NOT_RATIONAL",
            Error::NotRegular { .. } => "NOT_REGULAR",
            Error::NotUnitDeterminant => "NOT_UNIT_DETERMINANT",
            Error::DimensionMismatch { .. } => "DIMENSION_MISMATCH",
            Error::Parse { .. } => "PARSE",
            Error::Unsupported { .. } => "UNSUPPORTED",
        }
    }

    /// True for errors caused by malformed input rather than by the computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse(_)
                | Error::DimensionMismatch(_)
                | Error::UnsupportedField { .. }
                | Error::WrongField(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
