use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain structure: {0}")]
    InvalidStructure(String),

    #[error("unknown domain: {0}")]
    UnknownDomain(String),

    #[error("no domains")]
    NoDomains,

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid cuboid: {0}")]
    InvalidCuboid(String),

    #[error("core needs at least one cuboid")]
    EmptyCore,

    #[error("core intersection empty")]
    EmptyCentralRegion,

    #[error("mismatched domain sets: {0}")]
    DomainMismatch(String),

    #[error("concepts live in different conceptual spaces")]
    SpaceMismatch,

    #[error("dimension {0} is not part of the concept's domains")]
    DimensionNotInDomains(usize),

    #[error("measure undefined on unbounded support points")]
    Unbounded,

    #[error("{what} over {count} elements exceeds the enumeration limit of {limit}")]
    TooLarge {
        what: &'static str,
        count: usize,
        limit: usize,
    },

    #[error("intersection membership underflows to zero")]
    Underflow,

    #[error("unknown concept: {0}")]
    UnknownConcept(String),

    #[error("unknown dimension: {0}")]
    UnknownDimension(String),

    #[error("{source}: {concept}")]
    Concept {
        concept: String,
        #[source]
        source: Box<Error>,
    },

    #[error("malformed space file: {0}")]
    Format(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn in_concept(self, concept: &str) -> Error {
        Error::Concept {
            concept: concept.to_string(),
            source: Box::new(self),
        }
    }
}
