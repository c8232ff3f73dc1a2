use thiserror::Error;

/// Errors raised by matrix construction, parsing and the forcing operations.
///
/// Row and column numbers carried in messages are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix dimensions must be at least 1x1 (got {rows}x{cols})")]
    ZeroDimension { rows: usize, cols: usize },

    #[error("matrix dimension {0} exceeds the supported maximum of 65536")]
    DimensionTooLarge(usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid selection: {0}")]
    InvalidSelection(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("pattern is {pattern_rows}x{pattern_cols} but the ambient matrix is only {rows}x{cols}")]
    PatternTooLarge {
        pattern_rows: usize,
        pattern_cols: usize,
        rows: usize,
        cols: usize,
    },

    #[error("all-zero patterns are not supported here")]
    AllZeroPattern,

    #[error("not a permutation matrix")]
    NotPermutation,

    #[error("position ({row}, {col}) holds a 0-entry")]
    ZeroEntry { row: usize, col: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no closed-form count applies: {0}")]
    NoFormula(String),

    #[error("enumeration of {needed} placements exceeds the cap of {cap}")]
    EnumerationCap { needed: u128, cap: u128 },

    #[error("missing table entry for M({n}, I_{k})")]
    MissingTableEntry { n: usize, k: usize },

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
