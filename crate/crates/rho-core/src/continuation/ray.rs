//! Single-ray continuation with event detection.

use serde::Serialize;

use crate::error::RhoError;
use crate::geometry::{DomainSpec, FrameSpec, ProblemSpec};
use crate::types::Cx;

use super::config::EngineConfig;
use super::dopri::{attempt_step, Controller, DenseSegment};

/// Why a ray stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RayKind {
    /// The image left the region `Ω`; the crossing is bisected.
    ExitRegion,
    /// The image left the ambient domain `X`.
    ExitAmbient,
    /// `|g|` collapsed below threshold, the trajectory blew up in finite
    /// time, or it hit an isolated boundary point.
    Singularity,
    /// The required step fell below `h_min`.
    StepCollapse,
    /// No failure detected up to `t_cap`.
    Capped,
}

/// Result of continuing one ray `ζ = t e^{iθ}`.
#[derive(Debug, Clone, Serialize)]
pub struct RayOutcome {
    pub theta: f64,
    /// Stopping value of `t`. Equals `t_cap` when `kind` is `Capped`.
    pub failure_radius: f64,
    pub kind: RayKind,
    /// Last in-domain point of the trace.
    pub witness: Cx,
    /// Smallest `|g|` seen along the path, with its location. This is the
    /// singularity-proximity indicator that drives fan refinement.
    pub min_abs_g: f64,
    pub t_at_min_abs_g: f64,
    pub z_at_min_abs_g: Cx,
    /// Smallest distance to the region complement along the path.
    pub min_gap: f64,
    pub t_at_min_gap: f64,
    pub z_at_min_gap: Cx,
    pub max_abs_z: f64,
    pub steps: usize,
}

impl RayOutcome {
    pub fn is_capped(&self) -> bool {
        self.kind == RayKind::Capped
    }
}

pub(crate) struct ScalarProblem<'a> {
    pub region: &'a DomainSpec,
    pub ambient: &'a DomainSpec,
    pub frame: &'a FrameSpec,
}

impl<'a> ScalarProblem<'a> {
    pub fn of(spec: &'a ProblemSpec) -> Self {
        ScalarProblem { region: &spec.region, ambient: &spec.ambient, frame: &spec.frame }
    }
}

/// Traces the continuation of `φ_a` along the ray with direction `theta`,
/// stopping at the first event or at `t_cap`.
pub fn trace_ray(
    spec: &ProblemSpec,
    a: Cx,
    theta: f64,
    cfg: &EngineConfig,
) -> Result<RayOutcome, RhoError> {
    let (outcome, _) = trace_ray_with_path(spec, a, theta, cfg, false)?;
    Ok(outcome)
}

/// Like [`trace_ray`], optionally recording the accepted `(t, z)` points.
pub fn trace_ray_with_path(
    spec: &ProblemSpec,
    a: Cx,
    theta: f64,
    cfg: &EngineConfig,
    record: bool,
) -> Result<(RayOutcome, Vec<(f64, Cx)>), RhoError> {
    cfg.check()?;
    spec.require_valid()?;
    if spec.is_product() {
        return Err(RhoError::Invalid(
            "trace_ray works on one-dimensional problems; split products first".into(),
        ));
    }
    if !spec.region.contains(a) {
        return Err(RhoError::PointOutsideRegion { point: a });
    }
    let mut path = Vec::new();
    let outcome = integrate_ray(
        &ScalarProblem::of(spec),
        a,
        theta,
        cfg,
        cfg.t_cap,
        if record { Some(&mut path) } else { None },
    );
    Ok((outcome, path))
}

// Proximity floor below which a trajectory stalling into an isolated
// boundary point is treated as a benign asymptotic approach (the remaining
// time to any hit diverges; see the puncture event for the finite-time case).
const PUNCTURE_FLOOR: f64 = 1e-120;

// Relative width of the near-boundary resolution floor: steps are capped so
// a single step cannot jump over complement features wider than this
// fraction of the initial boundary gap.
const GEOM_FLOOR_REL: f64 = 1e-9;

// Escape exponent above which `|z| > z_max` is classified as finite-time
// blow-up rather than benign (at most exponential) growth.
const ESCAPE_EXPONENT: f64 = 1.2;

const PROBES_PER_STEP: usize = 8;
const MAX_STEPS: usize = 2_000_000;

struct Trackers {
    min_abs_g: f64,
    t_at_min_abs_g: f64,
    z_at_min_abs_g: Cx,
    min_gap: f64,
    t_at_min_gap: f64,
    z_at_min_gap: Cx,
    max_abs_z: f64,
    // Departure from the basepoint, for periodic-orbit detection.
    max_departure: f64,
    dep_ring: [(f64, f64, Cx); 3],
    dep_count: usize,
    return_checks: usize,
    // (ln |z|, ln speed) reference for the escape exponent.
    growth_ref: Option<(f64, f64)>,
}

impl Trackers {
    fn new(a: Cx, abs_g0: f64, gap0: f64) -> Self {
        Trackers {
            min_abs_g: abs_g0,
            t_at_min_abs_g: 0.0,
            z_at_min_abs_g: a,
            min_gap: gap0,
            t_at_min_gap: 0.0,
            z_at_min_gap: a,
            max_abs_z: a.norm(),
            max_departure: 0.0,
            dep_ring: [(0.0, 0.0, a); 3],
            dep_count: 0,
            return_checks: 0,
            growth_ref: None,
        }
    }
}

/// Integrates `z' = e^{iθ}/g(z)` from `a` up to `t_stop`, classifying the
/// first event. `Capped` doubles as "reached `t_stop`" for callers that set
/// a custom stopping time.
pub(crate) fn integrate_ray(
    prob: &ScalarProblem<'_>,
    a: Cx,
    theta: f64,
    cfg: &EngineConfig,
    t_stop: f64,
    mut record: Option<&mut Vec<(f64, Cx)>>,
) -> RayOutcome {
    let dir = Cx::from_polar(1.0, theta);
    let frame = prob.frame;
    let g_ref = frame.eval(a).norm();
    let g_floor = cfg.eps_sing * g_ref;
    // |g| -> 0 signals a failure only for frames that can die at a zero of
    // g in finite time; for dz or dz/z a small |g| just means the benign
    // escape |z| -> infinity.
    let multiplicity = frame.singular_multiplicity();
    let gap0 = prob.region.interior_gap(a);
    let geom_floor = if gap0.is_finite() { GEOM_FLOOR_REL * gap0 } else { f64::INFINITY };

    // Isolated complement points cannot be caught by membership flips. A
    // puncture where g has a pole is unreachable at finite radius and
    // instead acts as a sink; see the stall cap below.
    let mut punctures: Vec<(Cx, RayKind, bool, f64)> = Vec::new();
    for p in prob.region.punctures() {
        punctures.push((p, RayKind::ExitRegion, frame.has_pole_at(p), (a - p).norm()));
    }
    for p in prob.ambient.punctures() {
        if !punctures.iter().any(|&(q, ..)| (q - p).norm() == 0.0) {
            punctures.push((p, RayKind::ExitAmbient, frame.has_pole_at(p), (a - p).norm()));
        }
    }

    let mut rhs = |_t: f64, z: Cx| dir / frame.eval(z);

    let mut t = 0.0;
    let mut z = a;
    let mut k1 = rhs(t, z);
    let mut trk = Trackers::new(a, g_ref, gap0);
    let mut ctrl = Controller::new();
    let mut steps = 0usize;

    if let Some(path) = record.as_deref_mut() {
        path.push((0.0, a));
    }

    let mut h = (1e-3 * (a.norm() + 1.0) * g_ref).clamp(cfg.h_min * 1e3, 0.1 * t_stop);
    if !h.is_finite() || h <= 0.0 {
        h = cfg.h_min * 1e3;
    }

    let finish = |kind: RayKind, t: f64, witness: Cx, trk: &Trackers, steps: usize| RayOutcome {
        theta,
        failure_radius: if kind == RayKind::Capped { t_stop } else { t },
        kind,
        witness,
        min_abs_g: trk.min_abs_g,
        t_at_min_abs_g: trk.t_at_min_abs_g,
        z_at_min_abs_g: trk.z_at_min_abs_g,
        min_gap: trk.min_gap,
        t_at_min_gap: trk.t_at_min_gap,
        z_at_min_gap: trk.z_at_min_gap,
        max_abs_z: trk.max_abs_z,
        steps,
    };

    loop {
        let remaining = t_stop - t;
        if remaining <= t_stop * 1e-15 + cfg.h_min {
            return finish(RayKind::Capped, t_stop, z, &trk, steps);
        }
        if steps >= MAX_STEPS {
            return finish(RayKind::StepCollapse, t, z, &trk, steps);
        }

        let mut h_try = h.min(remaining);
        // Near-boundary cap: keep the per-step displacement below half the
        // current gap so thin complement features are sampled, not jumped
        // over. The floor is a quarter of the nearest feature width (solid
        // boundaries need no creep at all), never below the global
        // resolution floor.
        let mut gap_capped = false;
        if geom_floor.is_finite() {
            let feature = 0.25 * prob.region.complement_feature_width(z);
            let floor_z = feature.max(geom_floor);
            if floor_z.is_finite() {
                let abs_g_here = frame.eval(z).norm();
                let cap = (0.5 * prob.region.interior_gap(z)).max(floor_z) * abs_g_here;
                if cap.is_finite() && cap > 0.0 && cap < h_try {
                    h_try = cap.max(cfg.h_min * 2.0);
                    gap_capped = true;
                }
            }
        }
        if h_try < cfg.h_min {
            return finish(RayKind::StepCollapse, t, z, &trk, steps);
        }

        let at = attempt_step(&mut rhs, t, z, h_try, k1, cfg.rtol, cfg.atol);
        if !(at.err <= 1.0) {
            // Rejected (or non-finite error from a near-zero of g).
            h = h_try * ctrl.reject(at.err);
            if h < cfg.h_min {
                return finish(RayKind::StepCollapse, t, z, &trk, steps);
            }
            steps += 1;
            continue;
        }

        let seg = DenseSegment::new(t, h_try, z, at.z_new, &at.k);
        // Dense probes matter where feature resolution drives the step (the
        // gap cap); plain error-controlled steps only need a coarse check
        // against curvature overshoot.
        let probes = if gap_capped { PROBES_PER_STEP } else { 3 };
        let mut tau_prev = t;
        for j in 1..=probes {
            let tau = t + h_try * j as f64 / probes as f64;
            let zj = if j == probes { at.z_new } else { seg.eval(tau) };
            let abs_g = frame.eval(zj).norm();

            if abs_g < trk.min_abs_g {
                trk.min_abs_g = abs_g;
                trk.t_at_min_abs_g = tau;
                trk.z_at_min_abs_g = zj;
            }
            if gap0.is_finite() {
                let gap = prob.region.interior_gap(zj);
                if gap < trk.min_gap {
                    trk.min_gap = gap;
                    trk.t_at_min_gap = tau;
                    trk.z_at_min_gap = zj;
                }
            }
            let abs_z = zj.norm();
            if abs_z > trk.max_abs_z {
                trk.max_abs_z = abs_z;
            }

            // 1. Region / ambient exit by membership flip.
            if !prob.region.contains(zj) {
                let (t_cross, z_inside) =
                    bisect_flip(&seg, tau_prev, tau, |w| prob.region.contains(w), cfg.bisect_tol);
                let z_outside = seg.eval((t_cross + (tau - t_cross) * 1e-3).min(tau));
                let kind = if prob.ambient.contains(z_outside) {
                    RayKind::ExitRegion
                } else {
                    RayKind::ExitAmbient
                };
                return finish(kind, t_cross, z_inside, &trk, steps);
            }

            // 2. Frame coefficient collapsing to zero. The stop triggers at
            // |g| = eps_sing, a remaining distance of m·|g²/g'| from the
            // true singular parameter (exact for this frame family, where
            // G(ζ)^{1/m} is affine); complete the radius by that tail.
            if let Some(m) = multiplicity.filter(|_| abs_g < g_floor) {
                let (t_cross, z_inside) = bisect_flip(
                    &seg,
                    tau_prev,
                    tau,
                    |w| frame.eval(w).norm() >= g_floor,
                    cfg.bisect_tol,
                );
                let g = frame.eval(z_inside);
                let dg = frame.eval_derivative(z_inside);
                let tail = if dg.norm() > 0.0 { m * (g * g / dg).norm() } else { 0.0 };
                return finish(RayKind::Singularity, t_cross + tail, z_inside, &trk, steps);
            }

            // 3. Isolated boundary points. Where g is regular, fire once the
            // estimated remaining time to the hit (distance times |g|, exact
            // for locally constant g) is a negligible fraction of t. Where g
            // has a pole the point is a sink that costs infinite ζ-time, so
            // an inward trajectory deep inside its neighborhood proves the
            // ray never fails: cap it instead of creeping forever.
            for &(p, kind, is_pole, scale_p) in &punctures {
                let d = (zj - p).norm();
                if is_pole {
                    if d < 1e-8 * scale_p && (dir / frame.eval(zj) * (zj - p).conj()).re < 0.0 {
                        return finish(RayKind::Capped, tau, zj, &trk, steps);
                    }
                    continue;
                }
                if d < PUNCTURE_FLOOR {
                    return finish(RayKind::Capped, tau, zj, &trk, steps);
                }
                let t_remaining = d * abs_g;
                if t_remaining < cfg.eps_sing * tau {
                    return finish(kind, tau + t_remaining, zj, &trk, steps);
                }
            }

            // 4. Escape to infinity. Superlinear speed growth in |z| means
            // the blow-up is at finite ζ-time; exponential growth (speed
            // linear in |z|, e.g. dz/z outward) never fails.
            if abs_z > cfg.z_max {
                let speed = 1.0 / abs_g;
                let blow_up = match trk.growth_ref {
                    Some((ln_z, ln_s)) => {
                        let dz = abs_z.ln() - ln_z;
                        dz > 0.1 && (speed.ln() - ln_s) / dz > ESCAPE_EXPONENT
                    }
                    None => false,
                };
                let kind = if blow_up { RayKind::Singularity } else { RayKind::Capped };
                return finish(kind, tau, zj, &trk, steps);
            }
            if abs_z > 0.0 {
                match trk.growth_ref {
                    Some((ln_z, _)) if abs_z.ln() < ln_z + 0.3 => {}
                    _ => trk.growth_ref = Some((abs_z.ln(), (1.0 / abs_g).ln())),
                }
            }

            tau_prev = tau;
        }

        // Periodic-orbit detection on accepted points: a return to the
        // basepoint of an autonomous flow proves the ray never fails. A
        // local minimum of the departure within 5% of the maximal departure
        // is a return candidate; the closest approach is then resolved by a
        // golden-section search over a locally re-integrated flow, which is
        // accurate far below the acceptance threshold.
        let dep = (at.z_new - a).norm();
        if dep > trk.max_departure {
            trk.max_departure = dep;
        }
        trk.dep_ring = [trk.dep_ring[1], trk.dep_ring[2], (t + h_try, dep, at.z_new)];
        trk.dep_count += 1;
        if trk.dep_count >= 3 && trk.return_checks < 16 {
            let [(t1, d1, z1), (t2, d2, _), (t3, d3, _)] = trk.dep_ring;
            if d2 < d1 && d2 < d3 && d2 < 0.05 * trk.max_departure {
                trk.return_checks += 1;
                let d_min = closest_return(frame, dir, z1, t3 - t1, a, cfg);
                if d_min < 1e-6 * trk.max_departure {
                    return finish(RayKind::Capped, t2, at.z_new, &trk, steps);
                }
            }
        }

        t += h_try;
        z = at.z_new;
        k1 = at.k[6];
        if let Some(path) = record.as_deref_mut() {
            path.push((t, z));
        }
        h = h_try * ctrl.accept(at.err);
        steps += 1;
    }
}

/// Distance of the closest approach to `target` of the flow started at
/// `z_start`, over the time window `[0, span]`. Each probe re-integrates
/// from `z_start` with fixed substeps, so the result does not inherit the
/// coarse outer step size.
fn closest_return(
    frame: &FrameSpec,
    dir: Cx,
    z_start: Cx,
    span: f64,
    target: Cx,
    cfg: &EngineConfig,
) -> f64 {
    let mut rhs = |_t: f64, z: Cx| dir / frame.eval(z);
    let mut flow_dist = |dt: f64| -> f64 {
        if dt <= 0.0 {
            return (z_start - target).norm();
        }
        let n = 16;
        let h = dt / n as f64;
        let mut z = z_start;
        let mut k1 = rhs(0.0, z);
        for i in 0..n {
            let at = attempt_step(&mut rhs, i as f64 * h, z, h, k1, cfg.rtol, cfg.atol);
            z = at.z_new;
            k1 = at.k[6];
        }
        (z - target).norm()
    };
    // Golden-section over the bracket; the departure profile is unimodal
    // between the neighbors of a local minimum.
    let phi = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (0.0f64, span);
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let mut f1 = flow_dist(x1);
    let mut f2 = flow_dist(x2);
    let mut best = f1.min(f2);
    for _ in 0..64 {
        if hi - lo < 1e-13 * span {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = flow_dist(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = flow_dist(x2);
        }
        best = best.min(f1.min(f2));
    }
    best
}

/// Bisects a predicate flip inside one dense segment. `pred` must hold at
/// `lo` and fail at `hi`; returns the crossing time and the last point where
/// the predicate held.
fn bisect_flip(
    seg: &DenseSegment,
    mut lo: f64,
    mut hi: f64,
    pred: impl Fn(Cx) -> bool,
    bisect_tol: f64,
) -> (f64, Cx) {
    // Localize one digit tighter than the reported bracket so paired runs
    // (scaling, monotonicity) agree within bisect_tol.
    let tol = 0.05 * bisect_tol * hi.max(f64::MIN_POSITIVE);
    let mut z_lo = seg.eval(lo);
    for _ in 0..80 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let zm = seg.eval(mid);
        if pred(zm) {
            lo = mid;
            z_lo = zm;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi), z_lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{DomainSpec, FrameSpec, ProblemSpec};

    fn cx(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    fn plane_exp() -> ProblemSpec {
        ProblemSpec::new(DomainSpec::Plane, DomainSpec::Plane, FrameSpec::Exp)
    }

    #[test]
    fn exp_ray_toward_branch_point_is_singular() {
        // phi(zeta) = log(1 + zeta) from a = 0: the branch point sits at
        // zeta = -1, so the ray theta = pi dies at radius 1.
        let cfg = EngineConfig::default();
        let out = trace_ray(&plane_exp(), cx(0.0, 0.0), std::f64::consts::PI, &cfg).unwrap();
        assert_eq!(out.kind, RayKind::Singularity);
        assert!((out.failure_radius - 1.0).abs() < 1e-6, "radius {}", out.failure_radius);
    }

    #[test]
    fn exp_ray_along_positive_axis_is_capped() {
        // log(1 + zeta) is analytic on the positive ray.
        let cfg = EngineConfig::default();
        let out = trace_ray(&plane_exp(), cx(0.0, 0.0), 0.0, &cfg).unwrap();
        assert_eq!(out.kind, RayKind::Capped);
        assert_eq!(out.failure_radius, cfg.t_cap);
    }

    #[test]
    fn unit_disk_ray_exits_at_boundary_distance() {
        let spec = ProblemSpec::new(
            DomainSpec::Plane,
            DomainSpec::disk(cx(0.0, 0.0), 1.0),
            FrameSpec::ConstOne,
        );
        let cfg = EngineConfig::default();
        for &theta in &[0.0, 1.0, 2.5, 4.0] {
            let out = trace_ray(&spec, cx(0.0, 0.0), theta, &cfg).unwrap();
            assert_eq!(out.kind, RayKind::ExitRegion);
            assert!((out.failure_radius - 1.0).abs() < 1e-6, "radius {}", out.failure_radius);
            assert!(spec.region.contains(out.witness));
        }
    }

    #[test]
    fn off_center_disk_ray_matches_directional_distance() {
        let spec = ProblemSpec::new(
            DomainSpec::Plane,
            DomainSpec::disk(cx(0.0, 0.0), 1.0),
            FrameSpec::ConstOne,
        );
        let cfg = EngineConfig::default();
        let a = cx(0.25, 0.0);
        let out = trace_ray(&spec, a, 0.0, &cfg).unwrap();
        assert!((out.failure_radius - 0.75).abs() < 1e-6);
        let out = trace_ray(&spec, a, std::f64::consts::PI, &cfg).unwrap();
        assert!((out.failure_radius - 1.25).abs() < 1e-6);
    }

    #[test]
    fn inv_z_rays_are_capped() {
        // phi(zeta) = a e^zeta never leaves the punctured plane: rotation
        // rays are periodic, radial rays stall or grow exponentially.
        let spec =
            ProblemSpec::new(DomainSpec::PuncturedPlane, DomainSpec::PuncturedPlane, FrameSpec::InvZ);
        let cfg = EngineConfig::default();
        for &theta in &[0.0, std::f64::consts::FRAC_PI_2, std::f64::consts::PI, 4.0] {
            let out = trace_ray(&spec, cx(1.0, 0.0), theta, &cfg).unwrap();
            assert_eq!(out.kind, RayKind::Capped, "theta {theta}: {:?}", out.kind);
            assert!(out.steps < 100_000, "theta {theta} took {} steps", out.steps);
        }
    }

    #[test]
    fn monomial_escape_ray_is_singular() {
        // k = -2: phi(zeta) = 1/(1/a - zeta) blows up at zeta = 1/a.
        let spec = ProblemSpec::new(
            DomainSpec::PuncturedPlane,
            DomainSpec::PuncturedPlane,
            FrameSpec::Monomial { k: -2 },
        );
        let cfg = EngineConfig::default();
        let out = trace_ray(&spec, cx(1.0, 0.0), 0.0, &cfg).unwrap();
        assert_eq!(out.kind, RayKind::Singularity);
        assert!((out.failure_radius - 1.0).abs() < 1e-4, "radius {}", out.failure_radius);
    }

    #[test]
    fn puncture_hit_classified_as_region_exit() {
        // omega = dz on C*: the ray from 1 through the origin hits the
        // puncture at t = 1.
        let spec = ProblemSpec::new(
            DomainSpec::PuncturedPlane,
            DomainSpec::PuncturedPlane,
            FrameSpec::ConstOne,
        );
        let cfg = EngineConfig::default();
        let out = trace_ray(&spec, cx(1.0, 0.0), std::f64::consts::PI, &cfg).unwrap();
        assert_eq!(out.kind, RayKind::ExitRegion);
        assert!((out.failure_radius - 1.0).abs() < 1e-6, "radius {}", out.failure_radius);
    }

    #[test]
    fn outside_basepoint_rejected() {
        let spec = ProblemSpec::new(
            DomainSpec::Plane,
            DomainSpec::disk(cx(0.0, 0.0), 1.0),
            FrameSpec::ConstOne,
        );
        let cfg = EngineConfig::default();
        assert!(trace_ray(&spec, cx(2.0, 0.0), 0.0, &cfg).is_err());
    }

    #[test]
    fn thin_annulus_hole_is_not_stepped_over() {
        // The inner hole has radius 1e-6; a ray through it must stop there,
        // not at the outer circle.
        let spec = ProblemSpec::new(
            DomainSpec::Plane,
            DomainSpec::annulus(cx(0.0, 0.0), 1e-6, 1.0),
            FrameSpec::ConstOne,
        );
        let cfg = EngineConfig::default();
        let out = trace_ray(&spec, cx(0.5, 0.0), std::f64::consts::PI, &cfg).unwrap();
        assert_eq!(out.kind, RayKind::ExitRegion);
        assert!(
            (out.failure_radius - (0.5 - 1e-6)).abs() < 1e-6,
            "radius {}",
            out.failure_radius
        );
    }
}
