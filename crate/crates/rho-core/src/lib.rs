//! Numerical analysis of the maximal-radius function of Abelian integrals.
//!
//! Given a plane domain `Ω` inside an ambient domain `X` and a nonvanishing
//! holomorphic 1-form `ω = g(z) dz` on `X`, the integral `α(x) = ∫_a^x ω` is a
//! local biholomorphism near every basepoint `a ∈ Ω`. Its inverse `φ_a` extends
//! analytically to a maximal disk `{|ζ| < ρ(a, Ω)}` with image inside `Ω`; the
//! radius `ρ(a, Ω)` generalizes the boundary distance function (for `ω = dz` it
//! *is* the boundary distance) and behaves like a Hartogs radius.
//!
//! This crate estimates `ρ` by continuing `φ_a` along rays of the `ζ`-plane —
//! integrating `dz/dζ = e^{iθ}/g(z)` with an embedded Runge–Kutta pair and
//! event detection — and ships the verification batteries for the identities
//! and inequalities `ρ` satisfies: closed-form oracles, Lipschitz continuity,
//! the Cartan–Thullen hull equality `ρ(K, Ω) = ρ(K̂_Ω, Ω)`, the Kobayashi
//! upper bound on the unit disk, boundary decay, the sub-mean-value property
//! of `−log ρ`, Runge-pair hypotheses, Taylor convergence radii via Cauchy
//! integrals, and the staged plurisubharmonic exhaustion construction.
//!
//! Module map:
//! - [`geometry`] — symbolic domains, frames, problem validation
//! - [`continuation`] — the ray ODE engine and `ρ` estimation
//! - [`hulls`] — rasterized holomorphically convex hulls and hull checks
//! - [`verify`] — oracles and property batteries

pub mod continuation;
pub mod error;
pub mod geometry;
pub mod hulls;
pub mod types;
pub mod verify;

pub use continuation::{
    phi_eval, rho_estimate, rho_field, trace_ray, EngineConfig, GridCell, GridField, RayKind,
    RayOutcome, RhoEstimate,
};
pub use error::RhoError;
pub use geometry::{DomainSpec, FrameSpec, ProblemSpec, ValidationIssue, ValidationReport};
pub use types::{Cx, Rho};
