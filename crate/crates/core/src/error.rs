use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("letter {letter} out of range for rank {m}")]
    LetterOutOfRange { letter: usize, m: usize },
    #[error("invalid dimension vector: {0}")]
    InvalidDimVector(String),
    #[error("invalid token: {0}")]
    InvalidToken(String),
    #[error("idempotent sequence outside the algebra: {0}")]
    IdemOutside(String),
    #[error("algebra mismatch")]
    AlgebraMismatch,
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("parse error at byte {offset}: {msg}")]
    Parse { offset: usize, msg: String },
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
