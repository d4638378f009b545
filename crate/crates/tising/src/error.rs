//! Crate-wide error type.

use crate::lattice::Site;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("site not in region: {0}")]
    SiteNotInRegion(Site),

    #[error("empty region")]
    EmptyRegion,

    #[error("event support not contained in region")]
    SupportOutsideRegion,

    #[error("enumeration too large: {sites} sites exceeds cap {cap}")]
    EnumerationTooLarge { sites: usize, cap: usize },

    #[error("mask layer too large: {sites} sites exceeds cap {cap}; use the Monte Carlo estimator instead")]
    MaskTooLarge { sites: usize, cap: usize },

    #[error("contradictory constraints at site {0}")]
    ContradictoryConstraints(Site),

    #[error("boundary key {0} is not an outside neighbor of the region")]
    BadBoundaryKey(Site),

    #[error("field must be defined on exactly the region's sites")]
    FieldMismatch,

    #[error("offset set is not symmetric under negation")]
    AsymmetricOffsets,

    #[error("ghost update requires homogeneous h")]
    InhomogeneousField,

    #[error("empty sample")]
    EmptySample,

    #[error("widen h-grid: {0}")]
    WidenHGrid(String),

    #[error("insufficient fit data: need at least {need} distances, got {got}")]
    InsufficientFitData { need: usize, got: usize },

    #[error("path leaves [0,1] in p")]
    PathLeavesUnitInterval,

    #[error("instance generator could not produce a required case: {0}")]
    GeneratorExhausted(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
