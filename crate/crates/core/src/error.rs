use std::io;

use crate::codec::CodingScheme;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid base {character:?} at position {position}")]
    InvalidBase { position: usize, character: char },

    #[error("sequence is empty")]
    EmptySequence,

    #[error("operation not defined for coding scheme {0}")]
    WrongScheme(CodingScheme),

    #[error("sequence of length {len} is too short for {scheme} (needs at least {min})")]
    TooShort {
        scheme: CodingScheme,
        len: usize,
        min: usize,
    },

    #[error("{pixels} pixels is not a multiple of the {word_length}-slot word")]
    NotAligned { pixels: usize, word_length: usize },

    #[error("window of {window} bases with {shifts} shifts does not fit a reference of {reference} bases")]
    WindowTooLarge {
        window: usize,
        shifts: usize,
        reference: usize,
    },

    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("SNR undefined: non-matching rows carry no intensity")]
    UndefinedSnr,

    #[error("{slots} slots exceed the {capacity} angular slots available")]
    TooManySlots { slots: usize, capacity: usize },

    #[error("{needed} shifts requested but geometry has only {rings} rings")]
    TooFewRings { needed: usize, rings: usize },

    #[error("invalid circular geometry: {0}")]
    InvalidGeometry(String),

    #[error("threshold {0} outside [0, 1]")]
    InvalidThreshold(f64),

    #[error("no projection row reaches the candidate threshold")]
    NoCandidates,

    #[error("no placement of blocks aligns the query")]
    NoAlignment,

    #[error("inconsistent instance specification: {0}")]
    InconsistentSpec(String),

    #[error("malformed FASTA at line {line}: {reason}")]
    MalformedFasta { line: usize, reason: String },

    #[error("record {record:?}: invalid base {character:?} at position {position}")]
    InvalidRecordBase {
        record: String,
        position: usize,
        character: char,
    },

    #[error("malformed image: {0}")]
    MalformedImage(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    PngEncoding(#[from] png::EncodingError),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
