//! Fan-based estimation of `ρ(a, Ω)` with adaptive angular refinement.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::RhoError;
use crate::geometry::ProblemSpec;
use crate::types::{Cx, Rho};

use super::config::EngineConfig;
use super::ray::{integrate_ray, RayKind, RayOutcome, ScalarProblem};

/// Bracketed estimate of `ρ(a, Ω)` from a refined ray fan.
#[derive(Debug, Clone, Serialize)]
pub struct RhoEstimate {
    /// Minimum failure radius over the final fan; `Unbounded` only when
    /// every ray was capped.
    pub value: Rho,
    pub lower: f64,
    pub upper: Rho,
    /// Direction achieving the minimum, when finite.
    pub argmin_theta: Option<f64>,
    pub rays_used: usize,
    pub refinement_rounds: usize,
    /// Per-factor estimates for split products (the per-coordinate radii);
    /// empty for one-dimensional problems.
    pub factor_estimates: Vec<RhoEstimate>,
}

impl RhoEstimate {
    /// Width of the reported bracket; zero for unbounded estimates.
    pub fn bracket_width(&self) -> f64 {
        match self.upper {
            Rho::Finite(u) => u - self.lower,
            Rho::Unbounded => 0.0,
        }
    }
}

/// Estimates `ρ(a, Ω)` for a one-dimensional problem.
pub fn rho_estimate(spec: &ProblemSpec, a: Cx, cfg: &EngineConfig) -> Result<RhoEstimate, RhoError> {
    rho_estimate_point(spec, &[a], cfg)
}

/// Estimates `ρ` at a tuple basepoint; split products recurse per factor
/// and combine by the minimum rule, retaining the per-factor radii.
pub fn rho_estimate_point(
    spec: &ProblemSpec,
    a: &[Cx],
    cfg: &EngineConfig,
) -> Result<RhoEstimate, RhoError> {
    cfg.check()?;
    spec.require_valid()?;
    if a.len() != spec.dim() {
        return Err(RhoError::DimensionMismatch { expected: spec.dim(), got: a.len() });
    }
    if !spec.region.contains_point(a)? {
        return Err(RhoError::PointOutsideRegion { point: a[0] });
    }

    if !spec.is_product() {
        return Ok(estimate_scalar(&ScalarProblem::of(spec), a[0], cfg));
    }

    let factors = spec.split_factors();
    let parts: Vec<RhoEstimate> = factors
        .iter()
        .zip(a)
        .map(|(f, &ai)| estimate_scalar(&ScalarProblem::of(f), ai, cfg))
        .collect();

    let mut value = Rho::Unbounded;
    let mut lower = f64::INFINITY;
    let mut upper = Rho::Unbounded;
    let mut argmin_theta = None;
    for p in &parts {
        if p.value.as_f64() < value.as_f64() {
            value = p.value;
            argmin_theta = p.argmin_theta;
        }
        lower = lower.min(p.lower);
        upper = upper.min(p.upper);
    }
    Ok(RhoEstimate {
        value,
        lower,
        upper,
        argmin_theta,
        rays_used: parts.iter().map(|p| p.rays_used).sum(),
        refinement_rounds: parts.iter().map(|p| p.refinement_rounds).max().unwrap_or(0),
        factor_estimates: parts,
    })
}

// Bisection candidates are not inserted into angular gaps tighter than this.
const MIN_ANGLE_GAP: f64 = 1e-6;
// Candidates closer than this to an existing ray are dropped; this also
// terminates the predictor once it reproduces its own fixed point.
const ANGLE_DEDUP: f64 = 1e-13;

pub(crate) fn estimate_scalar(prob: &ScalarProblem<'_>, a: Cx, cfg: &EngineConfig) -> RhoEstimate {
    let two_pi = std::f64::consts::TAU;
    let g_ref = prob.frame.eval(a).norm();
    let multiplicity = prob.frame.singular_multiplicity();
    let steer_targets: Vec<Cx> = {
        let mut ps = prob.region.complement_targets();
        for p in prob.ambient.complement_targets() {
            if !ps.iter().any(|q| (q - p).norm() == 0.0) {
                ps.push(p);
            }
        }
        ps
    };

    let trace_many = |angles: &[f64]| -> Vec<RayOutcome> {
        angles
            .par_iter()
            .map(|&theta| integrate_ray(prob, a, theta, cfg, cfg.t_cap, None))
            .collect()
    };

    let init: Vec<f64> =
        (0..cfg.n_rays_init).map(|j| two_pi * j as f64 / cfg.n_rays_init as f64).collect();
    let mut fan = trace_many(&init);
    sort_fan(&mut fan);

    let mut rounds = 0usize;
    for round in 0..cfg.refine_depth {
        let mut cands: Vec<f64> = Vec::new();

        // Bisect where adjacent radii disagree. Small |g| along a path is a
        // refinement signal only for frames that can die at a zero of g;
        // for dz/z it just marks benign escape.
        let sing_indicators_armed = multiplicity.is_some();
        let m = fan.len();
        for i in 0..m {
            let j = (i + 1) % m;
            let gap = cyclic_gap(fan[i].theta, fan[j].theta);
            if gap <= MIN_ANGLE_GAP {
                continue;
            }
            let (r1, r2) = (fan[i].failure_radius, fan[j].failure_radius);
            let disagree = (r1 - r2).abs() / r1.min(r2).max(f64::MIN_POSITIVE);
            let near_sing = sing_indicators_armed
                && (fan[i].min_abs_g < 10.0 * cfg.eps_sing * g_ref
                    || fan[j].min_abs_g < 10.0 * cfg.eps_sing * g_ref);
            if disagree > cfg.refine_trigger || near_sing {
                cands.push(norm_angle(fan[i].theta + 0.5 * gap));
            }
        }

        // Singular-direction predictor: a damped Newton step for the zero of
        // G(ζ) = g(z(ζ)) in the ζ-plane, taken from the closest-approach
        // point of the most affected rays. The uniform fan alone cannot find
        // an isolated failure direction (only one ray dies at finite radius
        // for e^z dz on the plane), so this is what makes refinement
        // converge there.
        if let Some(mult) = multiplicity {
            if round == 0 {
                // The basepoint itself is on every ray: seed the predictor
                // from it before any ray has been traced close.
                if let Some(theta) = newton_direction(prob, mult, Cx::new(0.0, 0.0), a) {
                    cands.push(theta);
                }
            }
            let mut by_g: Vec<&RayOutcome> = fan.iter().collect();
            by_g.sort_by(|x, y| x.min_abs_g.total_cmp(&y.min_abs_g));
            for ray in by_g.into_iter().take(2) {
                if ray.min_abs_g >= 0.5 * g_ref {
                    break;
                }
                let zeta_m = Cx::from_polar(ray.t_at_min_abs_g.max(0.0), ray.theta);
                if let Some(theta) = newton_direction(prob, mult, zeta_m, ray.z_at_min_abs_g) {
                    cands.push(theta);
                }
            }
        }

        // Same idea for complement components the fan can miss (punctures,
        // small holes): Newton for z(ζ) = p with dz/dζ = 1/g.
        for &p in &steer_targets {
            let scale0 = (a - p).norm();
            if round == 0 {
                if let Some(theta) = target_direction(prob, p, Cx::new(0.0, 0.0), a) {
                    cands.push(theta);
                }
            }
            if let Some(ray) = fan
                .iter()
                .filter(|r| r.min_gap < 0.5 * scale0)
                .min_by(|x, y| x.min_gap.total_cmp(&y.min_gap))
            {
                let zeta_m = Cx::from_polar(ray.t_at_min_gap.max(0.0), ray.theta);
                if let Some(theta) = target_direction(prob, p, zeta_m, ray.z_at_min_gap) {
                    cands.push(theta);
                }
            }
        }

        cands.retain(|&c| c.is_finite());
        cands.sort_by(f64::total_cmp);
        cands.dedup_by(|x, y| (*x - *y).abs() < ANGLE_DEDUP);
        cands.retain(|&c| fan.iter().all(|r| cyclic_dist(c, r.theta) > ANGLE_DEDUP));
        if cands.is_empty() {
            break;
        }

        fan.extend(trace_many(&cands));
        sort_fan(&mut fan);
        rounds += 1;
    }

    let mut rays_used = fan.len();
    let all_capped = fan.iter().all(|r| r.is_capped());
    if all_capped {
        return RhoEstimate {
            value: Rho::Unbounded,
            lower: cfg.t_cap,
            upper: Rho::Unbounded,
            argmin_theta: None,
            rays_used,
            refinement_rounds: rounds,
            factor_estimates: Vec::new(),
        };
    }
    let best_idx = (0..fan.len())
        .min_by(|&x, &y| fan[x].failure_radius.total_cmp(&fan[y].failure_radius))
        .expect("fan is nonempty");
    let mut best_radius = fan[best_idx].failure_radius;
    let mut best_theta = fan[best_idx].theta;

    // For boundary exits the fan only localizes the minimizing direction to
    // the angular gap, leaving a quadratic O(gap^2) bias in the value.
    // Sharpen by golden-section between the fan neighbors of the argmin;
    // needle-like minima (singularities, punctures) are already localized
    // by the predictor and unaffected since the best sample is kept.
    if matches!(fan[best_idx].kind, RayKind::ExitRegion | RayKind::ExitAmbient) {
        let m = fan.len();
        let left = fan[(best_idx + m - 1) % m].theta;
        let right = fan[(best_idx + 1) % m].theta;
        let lo = best_theta - cyclic_gap(left, best_theta);
        let hi = best_theta + cyclic_gap(best_theta, right);
        let golden = 0.618_033_988_749_894_9;
        let (mut lo, mut hi) = (lo, hi);
        let mut x1 = hi - golden * (hi - lo);
        let mut x2 = lo + golden * (hi - lo);
        let mut eval = |theta: f64| -> f64 {
            rays_used += 1;
            integrate_ray(prob, a, theta, cfg, cfg.t_cap, None).failure_radius
        };
        let mut f1 = eval(x1);
        let mut f2 = eval(x2);
        for _ in 0..48 {
            // Flat brackets stop early: either the parabolic minimum is
            // resolved to relative 1e-12, or the minimum is a needle the
            // section cannot see (the best fan sample already has it).
            if hi - lo < 1e-9 || (f1 - f2).abs() <= 1e-12 * f1.abs() {
                break;
            }
            if f1 <= f2 {
                if f1 < best_radius {
                    best_radius = f1;
                    best_theta = norm_angle(x1);
                }
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - golden * (hi - lo);
                f1 = eval(x1);
            } else {
                if f2 < best_radius {
                    best_radius = f2;
                    best_theta = norm_angle(x2);
                }
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + golden * (hi - lo);
                f2 = eval(x2);
            }
        }
        best_radius = best_radius.min(f1.min(f2));
    }

    RhoEstimate {
        value: Rho::Finite(best_radius),
        lower: best_radius * (1.0 - cfg.bisect_tol),
        upper: Rho::Finite(best_radius),
        argmin_theta: Some(best_theta),
        rays_used,
        refinement_rounds: rounds,
        factor_estimates: Vec::new(),
    }
}

/// Damped Newton step toward the zero of `G(ζ) = g(z(ζ))`:
/// `Δζ = −m·G/G' = −m·g(z)²/g'(z)`. Exact in one step whenever `G^{1/m}`
/// is affine in `ζ`, which holds for every pure frame in this family.
fn newton_direction(prob: &ScalarProblem<'_>, mult: f64, zeta_m: Cx, z_m: Cx) -> Option<f64> {
    let g = prob.frame.eval(z_m);
    let dg = prob.frame.eval_derivative(z_m);
    if dg.norm() == 0.0 || !g.is_finite() || !dg.is_finite() {
        return None;
    }
    let target = zeta_m - g * g / dg * mult;
    if target.norm() == 0.0 || !target.is_finite() {
        return None;
    }
    Some(norm_angle(target.arg()))
}

/// Newton step toward `z(ζ) = p`: since `dz/dζ = 1/g`,
/// `Δζ = −(z − p)·g(z)`.
fn target_direction(prob: &ScalarProblem<'_>, p: Cx, zeta_m: Cx, z_m: Cx) -> Option<f64> {
    let g = prob.frame.eval(z_m);
    if !g.is_finite() {
        return None;
    }
    let target = zeta_m - (z_m - p) * g;
    if target.norm() == 0.0 || !target.is_finite() {
        return None;
    }
    Some(norm_angle(target.arg()))
}

fn norm_angle(theta: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let mut t = theta % two_pi;
    if t < 0.0 {
        t += two_pi;
    }
    t
}

fn cyclic_gap(from: f64, to: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let mut d = to - from;
    while d <= 0.0 {
        d += two_pi;
    }
    d
}

fn cyclic_dist(x: f64, y: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let d = (x - y).abs() % two_pi;
    d.min(two_pi - d)
}

fn sort_fan(fan: &mut [RayOutcome]) {
    fan.sort_by(|x, y| x.theta.total_cmp(&y.theta));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{DomainSpec, FrameSpec};

    fn cx(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    fn cfg() -> EngineConfig {
        EngineConfig::default()
    }

    #[test]
    fn exp_oracle_at_one() {
        // rho(a) = |e^a| for e^z dz on the plane.
        let spec = ProblemSpec::new(DomainSpec::Plane, DomainSpec::Plane, FrameSpec::Exp);
        let est = rho_estimate(&spec, cx(1.0, 0.0), &cfg()).unwrap();
        let rho = est.value.finite().expect("finite");
        assert!((rho - 1.0f64.exp()).abs() / 1.0f64.exp() < 0.02, "rho = {rho}");
    }

    #[test]
    fn exp_oracle_off_axis() {
        // a = i: the only failing direction is pi + 1, far from any fan ray.
        let spec = ProblemSpec::new(DomainSpec::Plane, DomainSpec::Plane, FrameSpec::Exp);
        let est = rho_estimate(&spec, cx(0.0, 1.0), &cfg()).unwrap();
        let rho = est.value.finite().expect("finite");
        assert!((rho - 1.0).abs() < 0.02, "rho = {rho}");
        let theta = est.argmin_theta.unwrap();
        assert!(
            cyclic_dist(theta, std::f64::consts::PI + 1.0) < 1e-3,
            "argmin theta = {theta}"
        );
    }

    #[test]
    fn monomial_oracle() {
        // rho(a) = |a^{k+1}|/|k+1| on the punctured plane.
        let spec = ProblemSpec::new(
            DomainSpec::PuncturedPlane,
            DomainSpec::PuncturedPlane,
            FrameSpec::Monomial { k: 1 },
        );
        let est = rho_estimate(&spec, cx(2.0, 0.0), &cfg()).unwrap();
        let rho = est.value.finite().expect("finite");
        assert!((rho - 2.0).abs() < 0.02, "rho = {rho}");
    }

    #[test]
    fn monomial_negative_exponent_oracle() {
        let spec = ProblemSpec::new(
            DomainSpec::PuncturedPlane,
            DomainSpec::PuncturedPlane,
            FrameSpec::Monomial { k: -2 },
        );
        let est = rho_estimate(&spec, cx(0.0, 1.0), &cfg()).unwrap();
        let rho = est.value.finite().expect("finite");
        assert!((rho - 1.0).abs() < 0.01, "rho = {rho}");
    }

    #[test]
    fn unit_disk_boundary_distance() {
        let spec = ProblemSpec::new(
            DomainSpec::Plane,
            DomainSpec::disk(cx(0.0, 0.0), 1.0),
            FrameSpec::ConstOne,
        );
        let est = rho_estimate(&spec, cx(0.25, 0.0), &cfg()).unwrap();
        let rho = est.value.finite().expect("finite");
        assert!((rho - 0.75).abs() < 0.0075, "rho = {rho}");
        assert!(est.lower <= rho && rho <= est.upper.as_f64());
    }

    #[test]
    fn const_one_on_plane_unbounded() {
        let spec = ProblemSpec::new(DomainSpec::Plane, DomainSpec::Plane, FrameSpec::ConstOne);
        let est = rho_estimate(&spec, cx(3.0, -2.0), &cfg()).unwrap();
        assert_eq!(est.value, Rho::Unbounded);
        assert_eq!(est.lower, cfg().t_cap);
        assert!(est.argmin_theta.is_none());
    }

    #[test]
    fn inv_z_unbounded() {
        let spec = ProblemSpec::new(
            DomainSpec::PuncturedPlane,
            DomainSpec::PuncturedPlane,
            FrameSpec::InvZ,
        );
        let est = rho_estimate(&spec, cx(1.0, 0.0), &cfg()).unwrap();
        assert_eq!(est.value, Rho::Unbounded);
    }

    #[test]
    fn const_one_on_punctured_plane_distance_to_origin() {
        let spec = ProblemSpec::new(
            DomainSpec::PuncturedPlane,
            DomainSpec::PuncturedPlane,
            FrameSpec::ConstOne,
        );
        let est = rho_estimate(&spec, cx(0.6, 0.8), &cfg()).unwrap();
        let rho = est.value.finite().expect("finite");
        assert!((rho - 1.0).abs() < 0.01, "rho = {rho}");
    }

    #[test]
    fn split_product_takes_minimum() {
        let disk = DomainSpec::disk(cx(0.0, 0.0), 1.0);
        let spec = ProblemSpec::new(
            DomainSpec::Product { factors: vec![DomainSpec::Plane, DomainSpec::Plane] },
            DomainSpec::Product { factors: vec![disk.clone(), disk] },
            FrameSpec::SplitProduct { factors: vec![FrameSpec::ConstOne, FrameSpec::ConstOne] },
        );
        let est = rho_estimate_point(&spec, &[cx(0.5, 0.0), cx(0.2, 0.0)], &cfg()).unwrap();
        let rho = est.value.finite().expect("finite");
        assert!((rho - 0.5).abs() < 0.005, "rho = {rho}");
        assert_eq!(est.factor_estimates.len(), 2);
        let f1 = est.factor_estimates[1].value.finite().unwrap();
        assert!((f1 - 0.8).abs() < 0.008, "factor 1 = {f1}");
    }

    #[test]
    fn scaled_frame_scales_rho() {
        let spec = ProblemSpec::new(DomainSpec::Plane, DomainSpec::Plane, FrameSpec::Exp);
        let scaled = ProblemSpec::new(
            DomainSpec::Plane,
            DomainSpec::Plane,
            FrameSpec::scaled(cx(0.0, 3.0), FrameSpec::Exp),
        );
        let a = cx(0.5, 0.3);
        let base = rho_estimate(&spec, a, &cfg()).unwrap().value.finite().unwrap();
        let scl = rho_estimate(&scaled, a, &cfg()).unwrap().value.finite().unwrap();
        assert!((scl - 3.0 * base).abs() / (3.0 * base) < 1e-6, "base {base}, scaled {scl}");
    }
}
