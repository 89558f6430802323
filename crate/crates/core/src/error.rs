use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlcError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("representation mismatch: cannot pair an elementary and a bipartite object")]
    RepresentationMismatch,

    #[error("invalid model name `{0}`")]
    InvalidModel(String),

    #[error("frozen model index {0} outside 16..=23")]
    FrozenIndexOutOfRange(u32),

    #[error("index {index} out of range for {what} (len {len})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("strategy invalid: {0}")]
    InvalidStrategy(String),

    #[error("state not found in catalog")]
    NotInCatalog,

    #[error("measurement outcomes do not sum to the unit effect")]
    IncompleteMeasurement,

    #[error("malformed linear program: {0}")]
    MalformedLp(String),

    #[error("unsupported number of strings {0} (expected 2 or 4)")]
    UnsupportedStringCount(usize),
}

pub type Result<T> = std::result::Result<T, AlcError>;
