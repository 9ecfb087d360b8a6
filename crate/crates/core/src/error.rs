use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("degree rule violated: {0}")]
    DegreeRule(String),

    #[error("not a differential: d∘d ≠ 0 ({0})")]
    NotADifferential(String),

    #[error("degenerate pairing: kernel witness {witness:?}")]
    DegeneratePairing { witness: Vec<String> },

    #[error("precondition failed ({side}): {detail}")]
    Precondition { side: String, detail: String },

    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("closedness violated on orbit {orbit:?} at arity {arity}")]
    ClosednessViolated { arity: usize, orbit: Vec<usize> },

    #[error("hypotheses violated: degenerate all-equal family {family:?} at arity {arity} has nonvanishing right-hand side")]
    HypothesesViolated { arity: usize, family: Vec<usize> },

    #[error("unsolvable paired equations at {0}")]
    UnsolvablePair(String),

    #[error("monomial {0} has no cyclization in the strict sense")]
    NoStrictCyclization(String),

    #[error("polynomial is not cyclic: {0}")]
    NonCyclic(String),
}

impl Error {
    pub fn precondition(side: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Precondition {
            side: side.into(),
            detail: detail.into(),
        }
    }
}
