//! Crate-wide error type.

use crate::continuation::RayOutcome;
use crate::types::Cx;

#[derive(Debug, Clone, thiserror::Error)]
pub enum RhoError {
    #[error("invalid problem specification: {0}")]
    InvalidSpec(String),

    #[error("point {point} lies outside the region")]
    PointOutsideRegion { point: Cx },

    #[error("dimension mismatch: domain has {expected} factors, point has {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("continuation hit an event before reaching the target: {0:?}")]
    EventBeforeTarget(Box<RayOutcome>),

    #[error("empty cell set")]
    EmptySet,

    #[error("ambiguous hull: K touches the raster frame on an unbounded region")]
    HullAmbiguous,

    #[error("containment violation: {0}")]
    Containment(String),

    #[error("stage radii must be strictly increasing")]
    NonMonotoneStages,

    #[error("-log rho is unbounded inside stage {stage}")]
    UnboundedInStage { stage: usize },

    #[error("{0}")]
    Invalid(String),
}
