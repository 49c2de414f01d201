use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    DimensionMismatch {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("ragged matrix: row {row} has {found} entries, expected {expected}")]
    RaggedMatrix { row: usize, expected: usize, found: usize },
    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
    #[error("duplicate concept name {0:?}")]
    DuplicateConcept(String),
    #[error("unknown concept {0:?}")]
    UnknownConcept(String),
    #[error("concept {0:?} appears in both domain and range")]
    OverlappingSpaces(String),
    #[error("state length {found} does not match {expected} concepts")]
    StateLength { expected: usize, found: usize },
    #[error("seed vectors may only contain ON and OFF")]
    IndeterminateSeed,
    #[error("clamp index {index} out of range for {len} concepts")]
    ClampOutOfRange { index: usize, len: usize },
    #[error("max_iterations must be at least 1")]
    ZeroIterations,
    #[error("weight {0} is negative")]
    NegativeWeight(String),
    #[error("{weights} weights given for {items} inputs")]
    WeightCount { weights: usize, items: usize },
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("edge {from} -> {to} has nonzero strength but lag {lag}")]
    InvalidLag { from: String, to: String, lag: u32 },
    #[error("no shared catalog between chain elements {left} and {right}")]
    Unchainable { left: usize, right: usize },
    #[error("{what} needs at least {needed} items, got {found}")]
    TooSmall {
        what: &'static str,
        needed: usize,
        found: usize,
    },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("alpha {0} outside [0, 1]")]
    InvalidAlpha(f64),
    #[error("invalid document: {0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, Error>;
