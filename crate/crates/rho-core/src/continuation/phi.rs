//! Evaluation of the inverse map `φ_a` and the forward Abelian integral.

use crate::error::RhoError;
use crate::geometry::{FrameSpec, ProblemSpec};
use crate::types::Cx;

use super::config::EngineConfig;
use super::ray::{integrate_ray, RayKind, ScalarProblem};

/// Evaluates `φ_a(ζ)` by integrating the ray ODE along the segment `[0, ζ]`.
///
/// Errors with the blocking [`RayOutcome`](super::RayOutcome) if an event
/// fires before `|ζ|` is reached; callers should keep `|ζ|` below an
/// established lower bound for `ρ(a, Ω)`.
pub fn phi_eval(spec: &ProblemSpec, a: Cx, zeta: Cx, cfg: &EngineConfig) -> Result<Cx, RhoError> {
    let (z, _) = phi_eval_with_path(spec, a, zeta, cfg)?;
    Ok(z)
}

/// Like [`phi_eval`], also returning the accepted `(t, z)` trace points, so
/// the forward integral `α(φ_a(ζ))` can be recomputed independently along
/// the path.
pub fn phi_eval_with_path(
    spec: &ProblemSpec,
    a: Cx,
    zeta: Cx,
    cfg: &EngineConfig,
) -> Result<(Cx, Vec<(f64, Cx)>), RhoError> {
    cfg.check()?;
    spec.require_valid()?;
    if spec.is_product() {
        return Err(RhoError::Invalid(
            "phi_eval works on one-dimensional problems; split products first".into(),
        ));
    }
    if !spec.region.contains(a) {
        return Err(RhoError::PointOutsideRegion { point: a });
    }
    let r = zeta.norm();
    if r == 0.0 {
        return Ok((a, vec![(0.0, a)]));
    }
    let mut path = Vec::new();
    let outcome = integrate_ray(
        &ScalarProblem::of(spec),
        a,
        zeta.arg(),
        cfg,
        r,
        Some(&mut path),
    );
    if outcome.kind != RayKind::Capped {
        return Err(RhoError::EventBeforeTarget(Box::new(outcome)));
    }
    let z = path.last().map(|&(_, z)| z).unwrap_or(a);
    Ok((z, path))
}

/// Integrates `ω = g dz` along the polyline through `points` with 5-point
/// Gauss–Legendre quadrature per segment.
///
/// For a holomorphic `g` the integral is path independent, so applied to a
/// trace of `φ_a` this recomputes `α(z_end)` through data (the visited
/// points) rather than through the ODE, giving an independent check of the
/// inverse property `α(φ_a(ζ)) = ζ`.
pub fn abelian_integral_polyline(frame: &FrameSpec, points: &[Cx]) -> Cx {
    // Gauss-Legendre nodes/weights on [-1, 1], n = 5.
    const NODES: [f64; 5] = [
        -0.906179845938664,
        -0.538469310105683,
        0.0,
        0.538469310105683,
        0.906179845938664,
    ];
    const WEIGHTS: [f64; 5] = [
        0.236926885056189,
        0.478628670499366,
        0.568888888888889,
        0.478628670499366,
        0.236926885056189,
    ];
    let mut total = Cx::new(0.0, 0.0);
    for pair in points.windows(2) {
        let (z0, z1) = (pair[0], pair[1]);
        let mid = 0.5 * (z0 + z1);
        let half = 0.5 * (z1 - z0);
        let mut seg = Cx::new(0.0, 0.0);
        for (x, w) in NODES.iter().zip(WEIGHTS.iter()) {
            seg += *w * frame.eval(mid + half * *x);
        }
        total += seg * half;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DomainSpec;

    fn cx(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    fn cfg() -> EngineConfig {
        EngineConfig::default()
    }

    #[test]
    fn const_one_translates() {
        let spec = ProblemSpec::new(DomainSpec::Plane, DomainSpec::Plane, FrameSpec::ConstOne);
        let z = phi_eval(&spec, cx(2.0, 0.0), cx(1.0, 1.0), &cfg()).unwrap();
        assert!((z - cx(3.0, 1.0)).norm() < 1e-9);
    }

    #[test]
    fn exp_inverse_is_log() {
        // phi(zeta) = log(1 + zeta) from a = 0.
        let spec = ProblemSpec::new(DomainSpec::Plane, DomainSpec::Plane, FrameSpec::Exp);
        let z = phi_eval(&spec, cx(0.0, 0.0), cx(0.5, 0.0), &cfg()).unwrap();
        assert!((z.re - 1.5f64.ln()).abs() < 1e-9, "z = {z}");
        assert!(z.im.abs() < 1e-9);
    }

    #[test]
    fn monomial_inverse_is_square_root() {
        // k = 1 from a = 1: phi(zeta) = sqrt(1 + 2 zeta), principal branch.
        let spec = ProblemSpec::new(
            DomainSpec::PuncturedPlane,
            DomainSpec::PuncturedPlane,
            FrameSpec::Monomial { k: 1 },
        );
        let z = phi_eval(&spec, cx(1.0, 0.0), cx(0.5, 0.0), &cfg()).unwrap();
        assert!((z.re - 2.0f64.sqrt()).abs() < 1e-9, "z = {z}");
    }

    #[test]
    fn event_before_target_is_reported() {
        let spec = ProblemSpec::new(
            DomainSpec::Plane,
            DomainSpec::disk(cx(0.0, 0.0), 1.0),
            FrameSpec::ConstOne,
        );
        let err = phi_eval(&spec, cx(0.0, 0.0), cx(2.0, 0.0), &cfg());
        assert!(matches!(err, Err(RhoError::EventBeforeTarget(_))));
    }

    #[test]
    fn forward_integral_recovers_zeta() {
        let spec = ProblemSpec::new(DomainSpec::Plane, DomainSpec::Plane, FrameSpec::Exp);
        let zeta = cx(0.3, 0.4);
        let (_, path) = phi_eval_with_path(&spec, cx(0.0, 0.0), zeta, &cfg()).unwrap();
        let pts: Vec<Cx> = path.iter().map(|&(_, z)| z).collect();
        let alpha = abelian_integral_polyline(&FrameSpec::Exp, &pts);
        assert!((alpha - zeta).norm() < 1e-8, "alpha = {alpha}");
    }

    #[test]
    fn polyline_integral_is_exact_for_const() {
        let pts = [cx(0.0, 0.0), cx(1.0, 2.0), cx(-3.0, 1.0)];
        let alpha = abelian_integral_polyline(&FrameSpec::ConstOne, &pts);
        assert!((alpha - cx(-3.0, 1.0)).norm() < 1e-14);
    }
}
