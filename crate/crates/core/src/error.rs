use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Pipeline stage of [`crate::grouprec::recognize`], used to locate failures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    ClassCheck,
    Extraction,
    Pushforward,
    Representative,
    Equivalence,
    Verification,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Stage::ClassCheck => "class check",
            Stage::Extraction => "cocycle extraction",
            Stage::Pushforward => "coefficient pushforward",
            Stage::Representative => "bimultiplicative representative",
            Stage::Equivalence => "extension equivalence",
            Stage::Verification => "diagram verification",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed element: {0}")]
    MalformedElement(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("not divisible in this coefficient group: {0}")]
    NotDivisible(String),

    #[error("pairing entry ({i},{j}) has order {order}, which does not divide gcd {gcd}")]
    IllDefinedEntry { i: usize, j: usize, order: u64, gcd: u64 },

    #[error("malformed cocycle: {0}")]
    MalformedCocycle(String),

    #[error("not a cocycle: {0}")]
    NotACocycle(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("no refinement in this coefficient group: {0}")]
    NoRefinement(String),

    #[error("search space too large: estimated {estimate} nodes exceeds limit {limit}")]
    SearchSpace { estimate: u128, limit: u128 },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("too large: {0}")]
    TooLarge(String),

    #[error("invalid group table: {0}")]
    InvalidTable(String),

    #[error("hypothesis failure: {0}")]
    Hypothesis(String),

    #[error("unknown builtin group `{0}`")]
    UnknownBuiltin(String),

    #[error("non-injective coefficient map: {0}")]
    NotInjective(String),

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("{stage}: {source}")]
    Stage { stage: Stage, source: Box<Error> },
}

impl Error {
    pub(crate) fn at(stage: Stage) -> impl FnOnce(Error) -> Error {
        move |source| Error::Stage { stage, source: Box::new(source) }
    }

    /// The innermost error, with stage wrappers removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }
}
