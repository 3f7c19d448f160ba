//! Analytic continuation of the inverse Abelian integral along rays.
//!
//! For a problem `(X, Ω, ω = g dz)` and a basepoint `a ∈ Ω`, the inverse
//! `φ_a` of `ζ = ∫_a^z ω` satisfies the ODE `dz/dζ = 1/g(z)`. Along the ray
//! `ζ = t e^{iθ}` this is `z'(t) = e^{iθ}/g(z(t))`, `z(0) = a`. By the
//! monodromy theorem, `φ_a` extends to the open disk of radius `r` with image
//! in `Ω` exactly when continuation succeeds along every ray up to `r`, so
//!
//! ```text
//! ρ(a, Ω) = inf over θ of (first failure radius along the ray θ).
//! ```
//!
//! [`trace_ray`] integrates one ray with an embedded Runge–Kutta 5(4) pair
//! and classifies the first failure event; [`rho_estimate`] drives an
//! adaptively refined fan of rays. The failure set in `θ` can be a single
//! direction (for `ω = e^z dz` on the plane only one ray fails at a finite
//! radius), so refinement is driven not just by disagreement between
//! adjacent rays but by singularity-proximity indicators gathered along each
//! path; see [`estimate`] for the predictor. Reported brackets are honest
//! heuristics, not certified bounds.

mod config;
mod dopri;
mod estimate;
mod field;
mod phi;
mod ray;

pub use config::EngineConfig;
pub use estimate::{rho_estimate, rho_estimate_point, RhoEstimate};
pub use field::{rho_field, rho_over_points, GridCell, GridField};
pub use phi::{abelian_integral_polyline, phi_eval, phi_eval_with_path};
pub use ray::{trace_ray, trace_ray_with_path, RayKind, RayOutcome};
