use std::path::PathBuf;

/// Errors shared by every module of the crate.
///
/// Invalid-input errors (`NotPrime`, `SymbolOutOfRange`, ...) are caused by bad
/// caller data; the remaining variants signal that an internal consistency
/// check failed and the result would not be trustworthy.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{q} is not a prime alphabet size")]
    NotPrime { q: u64 },

    #[error("alphabet size {q} exceeds the supported maximum of {max}")]
    BaseTooLarge { q: u64, max: u64 },

    #[error("symbol value {value} is out of range for alphabet size {q}")]
    SymbolOutOfRange { value: u64, q: u8 },

    #[error("cannot parse {input:?} as a word over the {q}-letter alphabet")]
    WordParse { input: String, q: u8 },

    #[error("word is defined over alphabet size {word_q} but the sequence uses {seq_q}")]
    BaseMismatch { word_q: u8, seq_q: u8 },

    #[error("digit string must be non-empty and free of leading zeros")]
    InvalidDigitString,

    #[error("the common difference of an arithmetic progression must be positive")]
    ZeroDifference,

    #[error("operation requires a non-empty word")]
    EmptyWord,

    #[error("operation requires a positive length")]
    ZeroLength,

    #[error("{what} would overflow the supported integer range")]
    Overflow { what: &'static str },

    #[error("search window of {needed} symbols exceeds the feasible limit of {limit}")]
    WindowTooLarge { needed: u128, limit: u64 },

    #[error("expected a word of length {expected}, got length {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {what}")]
    InvalidParameter { what: &'static str },

    #[error("runs of length q^n + 2q with difference q^n - 1 exist only when q divides n; got q={q}, n={n}")]
    ExtendedRunUnavailable { q: u8, n: u32 },

    #[error("no z <= {z_cap} realizes a run of length {target} for q={q}, n={n}")]
    WitnessSearchExhausted {
        q: u8,
        n: u32,
        target: u64,
        z_cap: u64,
    },

    #[error("basis construction failed: {reason}")]
    BasisConstruction { reason: String },

    #[error(
        "embedding verification failed for word {word}: slice at the constructed (c, d) read {got}"
    )]
    EmbeddingVerification { word: String, got: String },

    #[error("search budget exhausted: {what} (no difference <= {budget} works)")]
    SearchBudgetExhausted { what: String, budget: u64 },

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("cache file {path}: line {line}: {reason}")]
    CacheFormat {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("cache entry for (q={q}, {word}) fails re-verification")]
    CacheVerification { q: u8, word: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
