use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },

    #[error("variable z{index} out of range for ambient dimension {n}")]
    VariableOutOfRange { index: usize, n: usize },

    #[error("term `{term}` has degree {found}, expected {expected}")]
    NotHomogeneous {
        term: String,
        found: u32,
        expected: u32,
    },

    #[error("zero polynomial is not a valid input here")]
    ZeroPolynomial,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("invalid weight vector: {0}")]
    InvalidWeights(String),

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("resource guard exceeded: {0}")]
    ResourceGuard(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable snake_case tag used in machine-readable output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::VariableOutOfRange { .. } => "variable_out_of_range",
            Error::NotHomogeneous { .. } => "not_homogeneous",
            Error::ZeroPolynomial => "zero_polynomial",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::SingularMatrix => "singular_matrix",
            Error::InvalidWeights(_) => "invalid_weights",
            Error::InvalidCertificate(_) => "invalid_certificate",
            Error::Precondition(_) => "precondition",
            Error::ResourceGuard(_) => "resource_guard",
            Error::Internal(_) => "internal",
        }
    }

    /// Process exit status: 2 for bad input, 3 for an exhausted resource guard,
    /// 4 for a broken internal invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ResourceGuard(_) => 3,
            Error::Internal(_) => 4,
            _ => 2,
        }
    }
}
