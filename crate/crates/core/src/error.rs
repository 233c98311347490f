use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator index {generator} out of range for alphabet of size {alphabet}")]
    LetterOutOfRange { generator: u32, alphabet: u32 },

    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: u32, right: u32 },

    #[error("word is not freely reduced")]
    NotReduced,

    #[error("word is not cyclically reduced")]
    NotCyclicallyReduced,

    #[error("cannot sample a nonempty word over an empty alphabet")]
    EmptyAlphabet,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no small-cancellation presentation found after {attempts} attempts")]
    GenerationFailed { attempts: usize },

    #[error("padding verification failed after {retries} attempts")]
    PaddingFailed { retries: usize },

    #[error("padding target {target} too small (need more than {min})")]
    TargetTooSmall { target: usize, min: usize },

    #[error("presentation has no relators, so no nonempty trivial word exists")]
    NoRelators,

    #[error("modulus {0} is not prime")]
    NotPrime(String),

    #[error("value out of range for the field or bit width: {0}")]
    OutOfRange(String),

    #[error("duplicate x-coordinate {0}")]
    DuplicateX(String),

    #[error("access denied: {have} shares present, {need} required")]
    AccessDenied { have: usize, need: usize },

    #[error("dealing failed: {0}")]
    Dealing(String),

    #[error("protocol corruption: {0}")]
    ProtocolCorruption(String),

    #[error("relator update aborted: {0}")]
    UpdateAborted(String),
}
