use thiserror::Error;

pub type Result<T, E = CorrkitError> = std::result::Result<T, E>;

/// A single failed state-validation check, with the measured residual.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Hermiticity { residual: f64 },
    Trace { residual: f64 },
    PositiveSemidefinite { min_eigenvalue: f64 },
    Dimensions { expected: usize, actual: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Hermiticity { residual } => {
                write!(f, "hermiticity violation (residual {residual:.3e})")
            }
            Violation::Trace { residual } => {
                write!(f, "trace violation (residual {residual:.3e})")
            }
            Violation::PositiveSemidefinite { min_eigenvalue } => {
                write!(f, "PSD violation (min eigenvalue {min_eigenvalue:.3e})")
            }
            Violation::Dimensions { expected, actual } => {
                write!(f, "dimension mismatch (expected {expected}, got {actual})")
            }
        }
    }
}

fn join_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Error)]
pub enum CorrkitError {
    #[error("invalid mode structure: {reason}")]
    InvalidStructure { reason: String },

    #[error("state validation failed: {}", join_violations(violations))]
    InvalidState { violations: Vec<Violation> },

    #[error("mode label {label} out of range 1..={max}")]
    ModeLabelOutOfRange { label: usize, max: usize },

    #[error("duplicate mode label {label}")]
    DuplicateModeLabel { label: usize },

    #[error("index out of range: {reason}")]
    IndexOutOfRange { reason: String },

    #[error("unsupported structure: {reason}")]
    UnsupportedStructure { reason: String },

    #[error("input is not diagonal (largest off-diagonal magnitude {magnitude:.3e})")]
    NotDiagonal { magnitude: f64 },

    #[error("input is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("invalid decomposition: {reason}")]
    InvalidDecomposition { reason: String },

    #[error("rank {rank} exceeds exhaustive search cap {cap}")]
    RankTooLarge { rank: usize, cap: usize },

    #[error("invalid partition: {reason}")]
    InvalidPartition { reason: String },

    #[error("invalid parameter: {reason}")]
    InvalidParameter { reason: String },

    #[error("correlation undefined: {reason}")]
    UndefinedCorrelation { reason: String },

    #[error("empty data set")]
    EmptyDataSet,

    #[error("data error: {reason}")]
    DataError { reason: String },

    #[error("parse error: {reason}")]
    ParseError { reason: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CorrkitError {
    /// Stable machine-readable tag for each error category.
    pub fn kind(&self) -> &'static str {
        match self {
            CorrkitError::InvalidStructure { .. } => "invalid_structure",
            CorrkitError::InvalidState { .. } => "invalid_state",
            CorrkitError::ModeLabelOutOfRange { .. } => "mode_label_out_of_range",
            CorrkitError::DuplicateModeLabel { .. } => "duplicate_mode_label",
            CorrkitError::IndexOutOfRange { .. } => "index_out_of_range",
            CorrkitError::UnsupportedStructure { .. } => "unsupported_structure",
            CorrkitError::NotDiagonal { .. } => "not_diagonal",
            CorrkitError::NotHermitian { .. } => "not_hermitian",
            CorrkitError::InvalidDecomposition { .. } => "invalid_decomposition",
            CorrkitError::RankTooLarge { .. } => "rank_too_large",
            CorrkitError::InvalidPartition { .. } => "invalid_partition",
            CorrkitError::InvalidParameter { .. } => "invalid_parameter",
            CorrkitError::UndefinedCorrelation { .. } => "undefined_correlation",
            CorrkitError::EmptyDataSet => "empty_data_set",
            CorrkitError::DataError { .. } => "data_error",
            CorrkitError::ParseError { .. } => "parse_error",
            CorrkitError::Io(_) => "io_error",
        }
    }
}
