use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while parsing, validating or guarding the
/// exponential-cost operations. Row/column/symbol numbers in messages are
/// 1-based to match the text formats.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("symbol {sym} repeated in row {row}")]
    DuplicateInRow { row: usize, sym: usize },
    #[error("symbol {sym} repeated in column {col}")]
    DuplicateInColumn { col: usize, sym: usize },
    #[error("matrix is {rows}x{cols}, operation needs a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("{what} {got} out of range 1..={max}")]
    IndexOutOfRange {
        what: &'static str,
        got: usize,
        max: usize,
    },
    #[error("{op} is guarded to order {max}, got {got}")]
    OrderGuard {
        op: &'static str,
        max: usize,
        got: usize,
    },
    #[error("diagonal is not a transversal")]
    NotTransversal,
    #[error("intercalate not present in square")]
    IntercalateNotPresent,
    #[error("unknown claim key `{0}`")]
    UnknownClaim(String),
    #[error("claim `{claim}` expects a {expected} subject, got {got}")]
    SubjectMismatch {
        claim: String,
        expected: &'static str,
        got: &'static str,
    },
    #[error("failed to sample {what} after {attempts} attempts")]
    SamplingFailed { what: &'static str, attempts: usize },
    #[error("budget must be positive")]
    EmptyBudget,
}
