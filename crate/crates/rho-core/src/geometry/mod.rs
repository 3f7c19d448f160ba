//! Symbolic domain and frame representations with exact membership,
//! boundary-distance, and validation queries.
//!
//! Domains are a closed set of symbolic variants rather than arbitrary
//! membership callbacks so that boundary crossings can be bisected reliably
//! during continuation and so the boundary-distance oracles are exact.

mod domain;
mod frame;
mod problem;

pub use domain::DomainSpec;
pub use frame::FrameSpec;
pub use problem::{ProblemSpec, ValidationIssue, ValidationReport};
