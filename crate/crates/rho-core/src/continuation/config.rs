//! Engine tuning knobs with documented defaults.

use serde::{Deserialize, Serialize};

use crate::error::RhoError;

/// Tolerances and limits for ray continuation and fan refinement.
///
/// All event thresholds that compare against `|g|` are relative to `|g(a)|`
/// at the basepoint, and `bisect_tol` is relative to the current radius, so
/// estimates are invariant under rescaling the frame by a constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngineConfig {
    /// Rays in the initial uniform fan.
    pub n_rays_init: usize,
    /// Maximum refinement rounds over the fan.
    pub refine_depth: usize,
    /// Relative radius disagreement between adjacent rays that triggers
    /// insertion of a bisecting ray.
    pub refine_trigger: f64,
    /// Relative local error tolerance of the embedded RK step control.
    pub rtol: f64,
    /// Absolute local error tolerance of the embedded RK step control.
    pub atol: f64,
    /// Smallest admissible step; a smaller required step stops the ray as
    /// `StepCollapse`.
    pub h_min: f64,
    /// Radius beyond which a ray is reported as capped and the estimate as
    /// unbounded ("no failure up to `t_cap`", never a proof of infinity).
    pub t_cap: f64,
    /// Singularity proximity: a ray stops when `|g(z)| < eps_sing · |g(a)|`.
    pub eps_sing: f64,
    /// Escape magnitude: reaching `|z| > z_max` with superlinearly growing
    /// speed classifies the ray as singular (finite-time blow-up).
    pub z_max: f64,
    /// Relative tolerance for event localization and for the reported
    /// bracket width `upper − lower`.
    pub bisect_tol: f64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            n_rays_init: 64,
            refine_depth: 8,
            refine_trigger: 0.05,
            rtol: 1e-9,
            atol: 1e-12,
            h_min: 1e-16,
            t_cap: 1e6,
            eps_sing: 1e-8,
            z_max: 1e8,
            bisect_tol: 1e-6,
        }
    }
}

impl EngineConfig {
    pub fn check(&self) -> Result<(), RhoError> {
        let positive = [
            ("refine_trigger", self.refine_trigger),
            ("rtol", self.rtol),
            ("atol", self.atol),
            ("h_min", self.h_min),
            ("t_cap", self.t_cap),
            ("eps_sing", self.eps_sing),
            ("z_max", self.z_max),
            ("bisect_tol", self.bisect_tol),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(RhoError::Invalid(format!("{name} must be positive, got {v}")));
            }
        }
        if self.n_rays_init < 8 {
            return Err(RhoError::Invalid(format!(
                "n_rays_init must be at least 8, got {}",
                self.n_rays_init
            )));
        }
        if !(self.rtol < 1.0 && self.atol < 1.0) {
            return Err(RhoError::Invalid("rtol and atol must lie in (0, 1)".into()));
        }
        if self.bisect_tol >= 1e-3 {
            return Err(RhoError::Invalid("bisect_tol must be below 1e-3".into()));
        }
        Ok(())
    }
}
