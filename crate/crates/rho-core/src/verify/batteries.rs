//! Property batteries: engine-vs-oracle agreement, Lipschitz continuity,
//! the sub-mean-value inequality of `−log ρ`, the Kobayashi upper bound on
//! the unit disk, and boundary decay.

use rayon::prelude::*;

use crate::continuation::{rho_estimate_point, EngineConfig, RhoEstimate};
use crate::error::RhoError;
use crate::geometry::{DomainSpec, FrameSpec, ProblemSpec};
use crate::types::{Cx, Rho};

use super::oracle::oracle_rho;
use super::report::PropertyReport;

// Sentinel for "the property held vacuously"; keeps reports JSON-clean
// (serde_json turns non-finite floats into null).
const VACUOUS: f64 = -1.0;

/// Engine against closed-form values; the master regression of the oracle
/// suite. Every spec must have an oracle.
pub fn check_oracles(
    cases: &[(ProblemSpec, Vec<Vec<Cx>>)],
    cfg: &EngineConfig,
    rel_tol: f64,
) -> Result<PropertyReport, RhoError> {
    let mut jobs = Vec::new();
    for (spec, points) in cases {
        for a in points {
            let expected = oracle_rho(spec, a).ok_or_else(|| {
                RhoError::Invalid(format!("no closed form for the given spec at {a:?}"))
            })?;
            jobs.push((spec, a.clone(), expected));
        }
    }
    let errs: Vec<(f64, String)> = jobs
        .par_iter()
        .map(|(spec, a, expected)| {
            let got = rho_estimate_point(spec, a, cfg)?.value;
            let err = got.rel_err(*expected);
            Ok((err, format!("a={a:?}: engine {got}, oracle {expected}, rel err {err:.3e}")))
        })
        .collect::<Result<_, RhoError>>()?;

    let mut worst = VACUOUS * rel_tol;
    let mut diagnostics = Vec::new();
    for (err, line) in &errs {
        if *err > worst {
            worst = *err;
        }
        if *err > rel_tol {
            diagnostics.push(line.clone());
        }
    }
    Ok(PropertyReport::new("oracle-agreement", errs.len(), worst, rel_tol, diagnostics))
}

/// `|ρ(b) − ρ(c)| ≤ |b − c|` for the unit frame, where the integral
/// coordinate is the plane coordinate itself. Each pair is allowed its own
/// engine bracket widths on top of `tol`.
pub fn check_lipschitz(
    spec: &ProblemSpec,
    pairs: &[(Cx, Cx)],
    cfg: &EngineConfig,
    tol: f64,
) -> Result<PropertyReport, RhoError> {
    if !matches!(spec.frame, FrameSpec::ConstOne) {
        return Err(RhoError::Invalid(
            "the Lipschitz battery requires the unit frame, where the estimate is global".into(),
        ));
    }
    spec.require_valid()?;
    let results: Vec<(f64, String)> = pairs
        .par_iter()
        .map(|&(b, c)| {
            let eb = rho_estimate_point(spec, &[b], cfg)?;
            let ec = rho_estimate_point(spec, &[c], cfg)?;
            let violation = match (eb.value, ec.value) {
                (Rho::Finite(rb), Rho::Finite(rc)) => {
                    (rb - rc).abs() - (b - c).norm() - eb.bracket_width() - ec.bracket_width()
                }
                // Either both are unbounded (rho is identically infinite on
                // a connected domain) and the inequality is vacuous, or the
                // run is inconsistent and flagged.
                (Rho::Unbounded, Rho::Unbounded) => VACUOUS * (1.0 + tol),
                _ => f64::INFINITY,
            };
            Ok((violation, format!("pair ({b}, {c}): violation {violation:.3e}")))
        })
        .collect::<Result<_, RhoError>>()?;

    let mut worst = VACUOUS * (1.0 + tol);
    let mut diagnostics = Vec::new();
    for (v, line) in &results {
        if *v > worst {
            worst = *v;
        }
        if *v > tol {
            diagnostics.push(line.clone());
        }
    }
    Ok(PropertyReport::new("lipschitz", results.len(), worst, tol, diagnostics))
}

/// Sub-mean-value inequality for `−log ρ` on sampled circles:
/// `−log ρ(c) ≤ mean over uniform angles of −log ρ(c + r e^{iθ}) + tol`.
///
/// Circles on which `ρ` is unbounded are flagged as the identically
/// `−∞` branch of the dichotomy and count as vacuous passes.
pub fn check_submean(
    spec: &ProblemSpec,
    circles: &[(Cx, f64)],
    n_angles: usize,
    cfg: &EngineConfig,
    tol: f64,
) -> Result<PropertyReport, RhoError> {
    spec.require_valid()?;
    if n_angles < 8 {
        return Err(RhoError::Invalid("need at least 8 angles per circle".into()));
    }
    for &(c, r) in circles {
        let gap = spec.region.boundary_gap(c).map_err(|_| {
            RhoError::Containment(format!("circle center {c} is outside the region"))
        })?;
        if r <= 0.0 || r >= gap {
            return Err(RhoError::Containment(format!(
                "circle ({c}, {r}) is not compactly inside the region"
            )));
        }
    }

    let results: Vec<(f64, Option<String>)> = circles
        .par_iter()
        .map(|&(c, r)| {
            let center = rho_estimate_point(spec, &[c], cfg)?.value;
            let mut ring = Vec::with_capacity(n_angles);
            for j in 0..n_angles {
                let theta = std::f64::consts::TAU * j as f64 / n_angles as f64;
                let p = c + Cx::from_polar(r, theta);
                ring.push(rho_estimate_point(spec, &[p], cfg)?.value);
            }
            let all_finite = center.is_finite() && ring.iter().all(|v| v.is_finite());
            if !all_finite {
                return Ok((
                    VACUOUS * (1.0 + tol),
                    Some(format!("circle ({c}, {r}): identically -infinity branch, vacuous")),
                ));
            }
            let lhs = -center.as_f64().ln();
            let mean: f64 =
                ring.iter().map(|v| -v.as_f64().ln()).sum::<f64>() / n_angles as f64;
            let violation = lhs - mean;
            let diag = (violation > tol)
                .then(|| format!("circle ({c}, {r}): -log rho(c) = {lhs:.6}, mean = {mean:.6}"));
            Ok((violation, diag))
        })
        .collect::<Result<_, RhoError>>()?;

    let mut worst = VACUOUS * (1.0 + tol);
    let mut diagnostics = Vec::new();
    for (v, diag) in &results {
        if *v > worst {
            worst = *v;
        }
        if let Some(d) = diag {
            diagnostics.push(d.clone());
        }
    }
    Ok(PropertyReport::new("sub-mean-value", results.len(), worst, tol, diagnostics))
}

/// Upper bound by the hyperbolic metric of the unit disk:
/// `ρ(a) ≤ (1 − |a|²)(1 + tol)` for the unit frame, with equality at 0.
/// The problem is fixed to the one domain where the metric has a closed
/// form.
pub fn check_kobayashi_disk(
    points: &[Cx],
    cfg: &EngineConfig,
    tol: f64,
) -> Result<PropertyReport, RhoError> {
    let spec = ProblemSpec::new(
        DomainSpec::Plane,
        DomainSpec::disk(Cx::new(0.0, 0.0), 1.0),
        FrameSpec::ConstOne,
    );
    let results: Vec<(f64, String)> = points
        .par_iter()
        .map(|&a| {
            if a.norm() >= 1.0 {
                return Err(RhoError::PointOutsideRegion { point: a });
            }
            let rho = rho_estimate_point(&spec, &[a], cfg)?.value.as_f64();
            let bound = 1.0 - a.norm_sqr();
            // Relative slack against the metric bound.
            let violation = rho / bound - 1.0;
            Ok((violation, format!("a={a}: rho {rho:.6} vs bound {bound:.6}")))
        })
        .collect::<Result<_, RhoError>>()?;

    let mut worst = f64::NEG_INFINITY;
    let mut diagnostics = Vec::new();
    for (v, line) in &results {
        if *v > worst {
            worst = *v;
        }
        if *v > tol {
            diagnostics.push(line.clone());
        }
    }
    Ok(PropertyReport::new("kobayashi-disk-bound", results.len(), worst, tol, diagnostics))
}

/// `ρ → 0` along a sequence approaching a boundary point: the tail must be
/// monotone within bracket slack, stay bounded by a constant multiple of
/// the boundary distance, and the last value must drop below a tenth of
/// the first.
pub fn check_boundary_decay(
    spec: &ProblemSpec,
    approach: &[Cx],
    cfg: &EngineConfig,
) -> Result<PropertyReport, RhoError> {
    spec.require_valid()?;
    if approach.len() < 4 {
        return Err(RhoError::Invalid("need at least 4 approach points".into()));
    }
    let estimates: Vec<RhoEstimate> = approach
        .par_iter()
        .map(|&a| rho_estimate_point(spec, &[a], cfg))
        .collect::<Result<_, RhoError>>()?;
    let mut rho = Vec::with_capacity(estimates.len());
    for (a, e) in approach.iter().zip(&estimates) {
        match e.value {
            Rho::Finite(v) => rho.push(v),
            Rho::Unbounded => {
                return Err(RhoError::Invalid(format!(
                    "rho is unbounded at {a}; not a boundary approach"
                )))
            }
        }
    }

    let mut diagnostics = Vec::new();
    let mut worst = f64::NEG_INFINITY;

    // Final decay by at least 10x (normalized so 0 is the pass boundary).
    let v_decay = rho[rho.len() - 1] / (rho[0] / 10.0) - 1.0;
    worst = worst.max(v_decay);
    if v_decay > 0.0 {
        diagnostics.push(format!(
            "last value {:.3e} is not a tenth of the first {:.3e}",
            rho[rho.len() - 1],
            rho[0]
        ));
    }

    // Tail monotonicity with bracket slack.
    for k in rho.len() / 2..rho.len() - 1 {
        let slack = estimates[k].bracket_width() + estimates[k + 1].bracket_width() + 1e-12;
        let v = (rho[k + 1] - rho[k] - slack) / rho[k].max(f64::MIN_POSITIVE);
        worst = worst.max(v);
        if v > 0.0 {
            diagnostics.push(format!("tail not monotone at step {k}: {} -> {}", rho[k], rho[k + 1]));
        }
    }

    // Domination by the boundary distance, as a recorded constant.
    let mut c_max = 0.0f64;
    for (a, &r) in approach.iter().zip(&rho) {
        let dist = spec.region.boundary_gap(*a)?;
        if dist.is_finite() && dist > 0.0 {
            c_max = c_max.max(r / dist);
        }
    }
    diagnostics.push(format!("rho <= C * boundary distance with C = {c_max:.6}"));

    Ok(PropertyReport::new("boundary-decay", approach.len(), worst, 0.0, diagnostics))
}
