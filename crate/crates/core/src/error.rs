use thiserror::Error;

use crate::cellset::Cell;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("resolution must be at least {min} for a {kind} space (got {got})")]
    InvalidResolution {
        kind: &'static str,
        min: usize,
        got: usize,
    },
    #[error("space has {cells} cells, above the configured cap of {cap}")]
    TooManyCells { cells: usize, cap: usize },
    #[error("unsupported space kind `{0}`")]
    UnsupportedKind(String),
    #[error("hausdorff-undefined-on-empty")]
    HausdorffUndefinedOnEmpty,
    #[error("relations live on different spaces")]
    SpaceMismatch,
    #[error("map `{map}` cannot be rasterized on a {kind} space{detail}")]
    DescriptorMismatch {
        map: String,
        kind: &'static str,
        detail: String,
    },
    #[error("invalid map parameter: {0}")]
    InvalidMap(String),
    #[error("option `{option}` requires every map to be invertible, but `{map}` is not")]
    NonInvertible { option: &'static str, map: String },
    #[error("IFS must contain at least one map")]
    EmptySystem,
    #[error("word index {index} out of range for a system of {maps} maps")]
    WordIndexOutOfRange { index: usize, maps: usize },
    #[error("cell {cell} out of range for a space of {cells} cells")]
    CellOutOfRange { cell: Cell, cells: usize },
    #[error("horizon must be positive")]
    InvalidHorizon,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("seed list is empty or contains an empty seed")]
    EmptySeeds,
    #[error("candidate set must be a proper non-empty subset of the space")]
    ImproperCandidate,
    #[error("requires-exactness")]
    RequiresExactness,
    #[error("horizon {horizon} exceeded while extending a backward orbit (depth reached {depth})")]
    HorizonExceeded { horizon: usize, depth: usize, partial: Vec<Cell> },
    #[error("pseudo-orbit dead end at cell {cell} (step {step})")]
    DeadEnd { cell: Cell, step: usize },
    #[error("brute-force oracle supports at most {max} cells (got {got})")]
    OracleTooLarge { max: usize, got: usize },
    #[error("unknown gallery entry `{0}`")]
    UnknownGalleryEntry(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
