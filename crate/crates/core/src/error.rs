use thiserror::Error;

/// Errors raised by the automata engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("level mismatch: expected {expected}, found {found}")]
    LevelMismatch { expected: usize, found: usize },
    #[error("letter `{0}` is not in the alphabet")]
    UnknownLetter(String),
    #[error("letter index {index} out of range for alphabet of size {size}")]
    LetterOutOfRange { index: usize, size: usize },
    #[error("invalid automaton: {0}")]
    Invalid(String),
    #[error("automaton is not deterministic")]
    NotDeterministic,
    #[error("resource cap exceeded: {what} ({count} > {limit})")]
    Resource {
        what: &'static str,
        count: usize,
        limit: usize,
    },
    #[error("unknown relation symbol `{0}`")]
    UnknownSymbol(String),
    #[error("relation `{symbol}` has arity {expected}, used with {found} arguments")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("variable `{0}` is not bound")]
    UnboundVariable(String),
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("presentation check failed: {0}")]
    Presentation(String),
    #[error("certificate is not synchronized with the tree: {0}")]
    Desynchronized(String),
    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource { .. })
    }
}
