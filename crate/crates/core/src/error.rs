use thiserror::Error;

use crate::design::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported field order {0}: must be prime or one of 4, 8, 9")]
    UnsupportedOrder(usize),

    #[error("order {0} is too small for Latin-square construction (need m > 3)")]
    OrderTooSmall(usize),

    #[error("contrast table needs at least 2 levels, got {0}")]
    DegenerateOrder(usize),

    #[error("block size {block_size} is infeasible for m={m}, k={k} (must be in 1..={max})")]
    InfeasibleSize { m: usize, k: usize, block_size: usize, max: usize },

    #[error("not enough candidate Latin squares: need {needed}, have {available}")]
    CandidateExhausted { needed: usize, available: usize },

    #[error("m={0} exceeds the supported size for this operation")]
    SizeLimit(usize),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("design has no runs")]
    EmptyDesign,

    #[error("word length patterns have different shapes")]
    ShapeMismatch,

    #[error("no {0} move is available in the current search state")]
    NoMoveAvailable(&'static str),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("design failed validation: {}", format_violations(.0))]
    Validation(Vec<Violation>),

    #[error("column `{0}` is linearly dependent on the columns before it")]
    RankDeficient(String),

    #[error("{n} runs cannot support {p} model columns")]
    TooFewRuns { n: usize, p: usize },

    #[error("column `{0}` has zero variance")]
    ZeroVariance(String),

    #[error("unknown model term `{0}`")]
    UnknownLabel(String),

    #[error("invalid simulation config: {0}")]
    ConfigInvalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}
