use thiserror::Error;

/// Crate-wide error type. Contract violations that indicate an implementation
/// bug (rather than bad input) surface as [`Error::Internal`] so callers can
/// treat them as release blockers instead of user errors.
#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,
    #[error("alphabet cannot exceed 256 symbols")]
    AlphabetTooLarge,
    #[error("invalid alphabet symbol {0:?} (symbols must be non-empty and contain no whitespace)")]
    BadSymbol(String),
    #[error("duplicate alphabet symbol {0:?}")]
    DuplicateSymbol(String),
    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(String),
    #[error("factor w[{i}..{j}] is out of range for a word of length {len}")]
    FactorOutOfRange { i: usize, j: usize, len: usize },
    #[error("occurrence counting needs a non-empty pattern")]
    EmptyPattern,
    #[error("operation needs a non-empty word")]
    EmptyWord,
    #[error("words belong to incompatible alphabets")]
    AlphabetMismatch,
    #[error("morphism is not uniform (image lengths differ)")]
    NotUniform,
    #[error("morphism is 0-uniform; the check is undefined for empty images")]
    ZeroUniform,
    #[error("morphism has no rules")]
    EmptyRuleSet,
    #[error("no rule given for symbol {0:?}")]
    MissingRule(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("k = {k} is not supported here: {why}")]
    InvalidK { k: usize, why: &'static str },
    #[error("word of length {len} is too short: a direct {k}-power cover only decomposes for at least {min} letters")]
    WordTooShort { len: usize, k: usize, min: usize },
    #[error("invalid direct cover: {0}")]
    InvalidCover(String),
    #[error("no reduction candidate: every block already has pairwise-distinct letters")]
    NoReductionCandidate,
    #[error("internal consistency check failed ({0}); this is a bug, please report it")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
