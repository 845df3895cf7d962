use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid letter {letter} for a free group of rank {rank}")]
    InvalidLetter { letter: i64, rank: u32 },

    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: u32, found: u32 },

    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("homomorphism has no remnant")]
    NoRemnant,

    #[error("bounded-solution-length condition violated")]
    BslViolated,

    #[error("codomain rank must be greater than 1")]
    RankTooSmall,

    #[error("inverse automorphism images are required for this operation")]
    InverseRequired,

    #[error("invalid free-by-cyclic group: {0}")]
    InvalidGroup(String),

    #[error("truncation degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("polynomial has a nonzero constant term and does not induce an endomorphism")]
    NotAnEndomorphism,

    #[error("challenge must be 0 or 1, got {0}")]
    InvalidChallenge(u8),

    #[error("protocol state error: {0}")]
    State(&'static str),

    #[error("inconsistent polynomial system (1 = 0)")]
    InconsistentSystem,

    #[error("coefficient degree {degree} outside 1..{n}")]
    DegreeOutOfRange { degree: usize, n: usize },

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
