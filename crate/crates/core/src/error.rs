use num_bigint::BigUint;
use thiserror::Error;

/// Errors raised by parsing, validation and the capped decision procedures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid generator name `{0}`")]
    InvalidGenerator(String),

    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),

    #[error("unknown symbol `{0}`")]
    UndefinedSymbol(String),

    #[error("duplicate production for `{0}`")]
    DuplicateProduction(String),

    #[error("cyclic grammar through `{0}`")]
    CyclicGrammar(String),

    #[error("index out of range: [{i}, {j}] for a word of length {len}")]
    IndexOutOfRange { i: BigUint, j: BigUint, len: BigUint },

    #[error("alphabet mismatch")]
    AlphabetMismatch,

    #[error("decompression cap exceeded: word has length {0}")]
    CapExceeded(BigUint),

    #[error("munn tree exceeds node cap of {0}")]
    NodeCapExceeded(usize),

    #[error("search state space exceeds cap of {0}")]
    StateSpaceCapExceeded(usize),

    #[error("relator `{0}` is not idempotent")]
    NonIdempotentRelator(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("instance too large to enumerate: {0}")]
    TooLarge(String),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("alphabet collision on `{0}`")]
    AlphabetCollision(String),

    #[error("{0}")]
    Io(String),
}

impl Error {
    /// True for the errors that signal exhausted resource caps rather than bad input.
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            Error::CapExceeded(_) | Error::NodeCapExceeded(_) | Error::StateSpaceCapExceeded(_)
        )
    }

    /// Stable short name of the variant, for machine-readable diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::InvalidGenerator(_) => "invalid-generator",
            Error::DuplicateGenerator(_) => "duplicate-generator",
            Error::UndefinedSymbol(_) => "undefined-symbol",
            Error::DuplicateProduction(_) => "duplicate-production",
            Error::CyclicGrammar(_) => "cyclic-grammar",
            Error::IndexOutOfRange { .. } => "index-out-of-range",
            Error::AlphabetMismatch => "alphabet-mismatch",
            Error::CapExceeded(_) => "decompress-cap",
            Error::NodeCapExceeded(_) => "node-cap",
            Error::StateSpaceCapExceeded(_) => "state-cap",
            Error::NonIdempotentRelator(_) => "non-idempotent-relator",
            Error::InvalidInstance(_) => "invalid-instance",
            Error::TooLarge(_) => "too-large",
            Error::LengthMismatch(..) => "length-mismatch",
            Error::AlphabetCollision(_) => "alphabet-collision",
            Error::Io(_) => "io",
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
