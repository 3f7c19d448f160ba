//! Named verification suites over fixed fixtures, used by `rho verify` and
//! the acceptance tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rho_core::continuation::{rho_estimate, rho_estimate_point, EngineConfig};
use rho_core::geometry::{DomainSpec, FrameSpec, ProblemSpec};
use rho_core::hulls::{check_ct, check_runge_condition, hull_compute, HullBound, HullResult, Raster};
use rho_core::types::{Cx, Rho};
use rho_core::verify::{
    check_boundary_decay, check_kobayashi_disk, check_lipschitz, check_oracles, check_submean,
    PropertyReport,
};

use crate::CliError;

fn cx(re: f64, im: f64) -> Cx {
    Cx::new(re, im)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Oracles,
    Lipschitz,
    Submean,
    Kobayashi,
    Decay,
    Ct,
    Runge,
    Scaling,
    Product,
    All,
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "oracles" => Suite::Oracles,
            "lipschitz" => Suite::Lipschitz,
            "submean" => Suite::Submean,
            "kobayashi" => Suite::Kobayashi,
            "decay" => Suite::Decay,
            "ct" => Suite::Ct,
            "runge" => Suite::Runge,
            "scaling" => Suite::Scaling,
            "product" => Suite::Product,
            "all" => Suite::All,
            other => {
                return Err(format!(
                    "unknown suite '{other}'; expected one of oracles, lipschitz, submean, \
                     kobayashi, decay, ct, runge, scaling, product, all"
                ))
            }
        })
    }
}

fn engine_err(e: rho_core::RhoError) -> CliError {
    CliError::invalid_spec(e.to_string())
}

pub fn run_suite(suite: Suite, cfg: &EngineConfig, seed: u64) -> Result<Vec<PropertyReport>, CliError> {
    let mut reports = Vec::new();
    match suite {
        Suite::Oracles => reports.extend(oracles_suite(cfg)?),
        Suite::Lipschitz => reports.push(lipschitz_suite(cfg, seed)?),
        Suite::Submean => reports.extend(submean_suite(cfg, seed)?),
        Suite::Kobayashi => reports.extend(kobayashi_suite(cfg, seed)?),
        Suite::Decay => reports.extend(decay_suite(cfg)?),
        Suite::Ct => reports.extend(ct_suite(cfg)?.0),
        Suite::Runge => reports.extend(runge_suite(cfg)?),
        Suite::Scaling => reports.extend(scaling_suite(cfg)?),
        Suite::Product => reports.push(product_suite(cfg)?),
        Suite::All => {
            for s in [
                Suite::Oracles,
                Suite::Lipschitz,
                Suite::Submean,
                Suite::Kobayashi,
                Suite::Decay,
                Suite::Ct,
                Suite::Runge,
                Suite::Scaling,
                Suite::Product,
            ] {
                reports.extend(run_suite(s, cfg, seed)?);
            }
        }
    }
    Ok(reports)
}

fn named(mut report: PropertyReport, name: &str) -> PropertyReport {
    report.property = name.to_string();
    report
}

fn sample_in(rng: &mut ChaCha8Rng, region: &DomainSpec, bbox: (Cx, Cx)) -> Cx {
    loop {
        let z = cx(
            rng.gen_range(bbox.0.re..bbox.1.re),
            rng.gen_range(bbox.0.im..bbox.1.im),
        );
        if region.contains(z) {
            return z;
        }
    }
}

pub fn oracles_suite(cfg: &EngineConfig) -> Result<Vec<PropertyReport>, CliError> {
    let pts = |points: &[Cx]| -> Vec<Vec<Cx>> { points.iter().map(|&p| vec![p]).collect() };
    let punctured = |frame: FrameSpec| {
        ProblemSpec::new(DomainSpec::PuncturedPlane, DomainSpec::PuncturedPlane, frame)
    };

    let exp = ProblemSpec::new(DomainSpec::Plane, DomainSpec::Plane, FrameSpec::Exp);
    let exp_points = pts(&[cx(0.0, 0.0), cx(1.0, 0.0), cx(-1.0, 0.0), cx(0.0, 1.0), cx(1.0, 1.0)]);
    let exp_report = check_oracles(&[(exp, exp_points)], cfg, 0.02).map_err(engine_err)?;

    let monomial_cases: Vec<(ProblemSpec, Vec<Vec<Cx>>)> = [-3, -2, 0, 1, 2]
        .into_iter()
        .map(|k| {
            (
                punctured(FrameSpec::Monomial { k }),
                pts(&[cx(0.5, 0.0), cx(1.0, 0.0), cx(2.0, 0.0), cx(0.0, 1.0)]),
            )
        })
        .collect();
    let monomial_report = check_oracles(&monomial_cases, cfg, 0.01).map_err(engine_err)?;

    let unbounded_cases = vec![
        (
            ProblemSpec::new(DomainSpec::Plane, DomainSpec::Plane, FrameSpec::ConstOne),
            pts(&[cx(0.0, 0.0), cx(5.0, -1.0)]),
        ),
        (punctured(FrameSpec::InvZ), pts(&[cx(1.0, 0.0), cx(0.0, -2.0)])),
    ];
    let unbounded_report = check_oracles(&unbounded_cases, cfg, 0.01).map_err(engine_err)?;

    let gap_cases = vec![
        (
            ProblemSpec::new(
                DomainSpec::Plane,
                DomainSpec::disk(cx(0.0, 0.0), 1.0),
                FrameSpec::ConstOne,
            ),
            pts(&[cx(0.25, 0.0), cx(-0.6, 0.3)]),
        ),
        (
            ProblemSpec::new(
                DomainSpec::Plane,
                DomainSpec::annulus(cx(0.0, 0.0), 0.2, 2.0),
                FrameSpec::ConstOne,
            ),
            pts(&[cx(1.0, 0.0), cx(0.3, 0.0)]),
        ),
    ];
    let gap_report = check_oracles(&gap_cases, cfg, 0.01).map_err(engine_err)?;

    Ok(vec![
        named(exp_report, "oracles/exp"),
        named(monomial_report, "oracles/monomial"),
        named(unbounded_report, "oracles/unbounded"),
        named(gap_report, "oracles/boundary-distance"),
    ])
}

pub fn lipschitz_suite(cfg: &EngineConfig, seed: u64) -> Result<PropertyReport, CliError> {
    let region = DomainSpec::annulus(cx(0.0, 0.0), 0.2, 2.0);
    let spec = ProblemSpec::new(DomainSpec::Plane, region.clone(), FrameSpec::ConstOne);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bbox = (cx(-2.0, -2.0), cx(2.0, 2.0));
    let pairs: Vec<(Cx, Cx)> = (0..1000)
        .map(|_| (sample_in(&mut rng, &region, bbox), sample_in(&mut rng, &region, bbox)))
        .collect();
    check_lipschitz(&spec, &pairs, cfg, 1e-6).map_err(engine_err)
}

pub fn submean_suite(cfg: &EngineConfig, seed: u64) -> Result<Vec<PropertyReport>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Punctured-disk surrogate: subharmonicity of -log rho with a kink
    // locus, 200 random circles.
    let region = DomainSpec::annulus(cx(0.0, 0.0), 1e-6, 1.0);
    let spec = ProblemSpec::new(DomainSpec::Plane, region.clone(), FrameSpec::ConstOne);
    let bbox = (cx(-1.0, -1.0), cx(1.0, 1.0));
    let mut circles = Vec::with_capacity(200);
    while circles.len() < 200 {
        let c = sample_in(&mut rng, &region, bbox);
        let gap = region.boundary_gap(c).map_err(engine_err)?;
        if gap < 1e-3 {
            continue;
        }
        let r = gap * rng.gen_range(0.1..0.8);
        circles.push((c, r));
    }
    let surrogate = check_submean(&spec, &circles, 128, cfg, 1e-3).map_err(engine_err)?;

    // Harmonic case: -log rho for z dz on the punctured plane is harmonic
    // away from the origin, so circle means match centers to within the
    // engine noise, two-sided.
    let spec_h = ProblemSpec::new(
        DomainSpec::PuncturedPlane,
        DomainSpec::PuncturedPlane,
        FrameSpec::Monomial { k: 1 },
    );
    let mut worst_abs = 0.0f64;
    let n_circles = 50;
    let n_angles = 64;
    for _ in 0..n_circles {
        let c = Cx::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..std::f64::consts::TAU));
        let r = c.norm() * rng.gen_range(0.1..0.4);
        let center = rho_estimate(&spec_h, c, cfg).map_err(engine_err)?.value.as_f64();
        let mut mean = 0.0;
        for j in 0..n_angles {
            let theta = std::f64::consts::TAU * j as f64 / n_angles as f64;
            let p = c + Cx::from_polar(r, theta);
            mean += -rho_estimate(&spec_h, p, cfg).map_err(engine_err)?.value.as_f64().ln();
        }
        mean /= n_angles as f64;
        worst_abs = worst_abs.max(((-center.ln()) - mean).abs());
    }
    let harmonic = PropertyReport::new(
        "submean/harmonic-equality",
        n_circles,
        worst_abs,
        1e-3,
        vec!["two-sided margin of the circle mean against the center value".into()],
    );

    Ok(vec![named(surrogate, "submean/punctured-disk"), harmonic])
}

pub fn kobayashi_suite(cfg: &EngineConfig, seed: u64) -> Result<Vec<PropertyReport>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let disk = DomainSpec::disk(cx(0.0, 0.0), 1.0);
    let bbox = (cx(-1.0, -1.0), cx(1.0, 1.0));
    let points: Vec<Cx> = (0..100).map(|_| sample_in(&mut rng, &disk, bbox)).collect();
    let bound = check_kobayashi_disk(&points, cfg, 1e-6).map_err(engine_err)?;

    // Equality at the center: rho(0) = 1 = 1 - |0|^2.
    let spec = ProblemSpec::new(DomainSpec::Plane, disk, FrameSpec::ConstOne);
    let rho0 = rho_estimate(&spec, cx(0.0, 0.0), cfg).map_err(engine_err)?.value.as_f64();
    let equality = PropertyReport::new(
        "kobayashi/equality-at-center",
        1,
        (rho0 - 1.0).abs(),
        0.01,
        vec![format!("rho(0) = {rho0}")],
    );
    Ok(vec![named(bound, "kobayashi/upper-bound"), equality])
}

pub fn decay_suite(cfg: &EngineConfig) -> Result<Vec<PropertyReport>, CliError> {
    let disk = ProblemSpec::new(
        DomainSpec::Plane,
        DomainSpec::disk(cx(0.0, 0.0), 1.0),
        FrameSpec::ConstOne,
    );
    let seq: Vec<Cx> = (1..=10).map(|k| cx(1.0 - 0.5f64.powi(k), 0.0)).collect();
    let disk_report = check_boundary_decay(&disk, &seq, cfg).map_err(engine_err)?;

    let annulus = ProblemSpec::new(
        DomainSpec::Plane,
        DomainSpec::annulus(cx(0.0, 0.0), 0.2, 2.0),
        FrameSpec::ConstOne,
    );
    let seq: Vec<Cx> = (1..=10).map(|k| cx(0.2 + 0.6 * 0.5f64.powi(k), 0.0)).collect();
    let annulus_report = check_boundary_decay(&annulus, &seq, cfg).map_err(engine_err)?;

    // z^2 dz on the punctured plane: rho = |a|^3/3 -> 0 as a -> 0.
    let monomial = ProblemSpec::new(
        DomainSpec::PuncturedPlane,
        DomainSpec::PuncturedPlane,
        FrameSpec::Monomial { k: 2 },
    );
    let seq: Vec<Cx> = (1..=10).map(|k| cx(0.5f64.powi(k), 0.0)).collect();
    let monomial_report = check_boundary_decay(&monomial, &seq, cfg).map_err(engine_err)?;

    Ok(vec![
        named(disk_report, "decay/disk-boundary"),
        named(annulus_report, "decay/annulus-inner-boundary"),
        named(monomial_report, "decay/monomial-origin"),
    ])
}

/// The annular-band fixture: K = {0.9 <= |z| <= 1.1} inside the disk of
/// radius 2, rasterized at 256^2.
pub fn ct_suite(cfg: &EngineConfig) -> Result<(Vec<PropertyReport>, Raster, HullResult), CliError> {
    let region = DomainSpec::disk(cx(0.0, 0.0), 2.0);
    let spec = ProblemSpec::new(DomainSpec::Plane, region.clone(), FrameSpec::ConstOne);
    let raster =
        Raster::build(&region, (cx(-2.0, -2.0), cx(2.0, 2.0)), 256, 256).map_err(engine_err)?;
    let band = raster.select(|z| {
        let r = z.norm();
        (0.9..=1.1).contains(&r)
    });
    let report = check_ct(&band, &spec, &HullBound::Const(0.88), &raster, cfg, 1e-2)
        .map_err(engine_err)?;
    let hull = hull_compute(&band, &region, &raster).map_err(engine_err)?;

    // Shape check: the hull is exactly the closed disk of radius 1.1, up to
    // a one-cell collar at its boundary.
    let (dx, dy) = raster.cell_size();
    let collar = (dx * dx + dy * dy).sqrt();
    let mut mismatches = 0usize;
    for j in 0..raster.ny {
        for i in 0..raster.nx {
            let idx = raster.index(i, j);
            let r = raster.center(i, j).norm();
            if r < 1.1 - collar && !hull.hull_mask[idx] {
                mismatches += 1;
            }
            if r > 1.1 + collar && hull.hull_mask[idx] {
                mismatches += 1;
            }
        }
    }
    let shape = PropertyReport::new(
        "ct/hull-shape",
        raster.mask.len(),
        mismatches as f64,
        0.0,
        vec![format!(
            "filled components: {}, cell size {:.4}",
            hull.filled_components, dx
        )],
    );

    let equality = PropertyReport::new(
        "ct/hull-equality",
        band.iter().filter(|&&b| b).count(),
        report.equality_gap.max(report.worst_bound_violation),
        report.tol,
        vec![
            format!("rho(K) = {}, rho(hull) = {}", report.rho_k, report.rho_hull),
            format!("precondition |f| <= rho on K: {}", report.precondition_ok),
        ],
    );
    Ok((vec![equality, shape], raster, hull))
}

pub fn runge_suite(cfg: &EngineConfig) -> Result<Vec<PropertyReport>, CliError> {
    let ambient = ProblemSpec::new(
        DomainSpec::disk(cx(0.0, 0.0), 2.0),
        DomainSpec::disk(cx(0.0, 0.0), 2.0),
        FrameSpec::ConstOne,
    );
    let omega = DomainSpec::disk(cx(0.0, 0.0), 1.0);
    let spacing = 0.02;

    // K = closed disk of radius 0.5, rasterized finely enough that the
    // cell-center minimum is within 1% of the true rho(K).
    let k_raster = Raster::build(
        &DomainSpec::disk(cx(0.0, 0.0), 0.55),
        (cx(-0.55, -0.55), cx(0.55, 0.55)),
        192,
        192,
    )
    .map_err(engine_err)?;
    let k_small = k_raster.select(|z| z.norm() <= 0.5);

    let mut reports = Vec::new();
    // expected: (outer radius, holds, boundary sup, rho K)
    for (outer_r, expect_holds, expect_sup, expect_rho) in
        [(1.2, true, 0.2, 0.5), (1.6, false, 0.6, 0.5)]
    {
        let outer = DomainSpec::disk(cx(0.0, 0.0), outer_r);
        let report =
            check_runge_condition(&omega, &outer, &k_small, &k_raster, &ambient, cfg, spacing)
                .map_err(engine_err)?;
        let margin_dev = ((report.boundary_sup - expect_sup) / expect_sup)
            .abs()
            .max(((report.rho_k - expect_rho) / expect_rho).abs());
        let worst = if report.holds == expect_holds { margin_dev } else { f64::MAX };
        reports.push(PropertyReport::new(
            format!("runge/outer-{outer_r}"),
            report.boundary_samples,
            worst,
            0.01,
            vec![format!(
                "holds = {} (expected {expect_holds}), sup = {:.4}, rho(K) = {:.4}",
                report.holds, report.boundary_sup, report.rho_k
            )],
        ));
    }

    // A fat K leaves no room: 0.2 < 0.05 fails.
    let fat_raster = Raster::build(
        &DomainSpec::disk(cx(0.0, 0.0), 0.97),
        (cx(-0.97, -0.97), cx(0.97, 0.97)),
        192,
        192,
    )
    .map_err(engine_err)?;
    let k_fat = fat_raster.select(|z| z.norm() <= 0.95);
    let report = check_runge_condition(
        &omega,
        &DomainSpec::disk(cx(0.0, 0.0), 1.2),
        &k_fat,
        &fat_raster,
        &ambient,
        cfg,
        spacing,
    )
    .map_err(engine_err)?;
    reports.push(PropertyReport::new(
        "runge/fat-compact",
        report.boundary_samples,
        if report.holds { f64::MAX } else { 0.0 },
        0.01,
        vec![format!(
            "holds = {} (expected false), sup = {:.4}, rho(K) = {:.4}",
            report.holds, report.boundary_sup, report.rho_k
        )],
    ));
    Ok(reports)
}

pub fn scaling_suite(cfg: &EngineConfig) -> Result<Vec<PropertyReport>, CliError> {
    // rho scales by |c| under frame scaling.
    let fixtures = [
        (
            ProblemSpec::new(DomainSpec::Plane, DomainSpec::Plane, FrameSpec::Exp),
            cx(0.0, 3.0),
            cx(0.5, 0.3),
        ),
        (
            ProblemSpec::new(
                DomainSpec::Plane,
                DomainSpec::disk(cx(0.0, 0.0), 1.0),
                FrameSpec::ConstOne,
            ),
            cx(-2.0, 0.0),
            cx(0.25, 0.1),
        ),
        (
            ProblemSpec::new(
                DomainSpec::PuncturedPlane,
                DomainSpec::PuncturedPlane,
                FrameSpec::Monomial { k: 1 },
            ),
            cx(0.0, 0.5),
            cx(1.5, 0.5),
        ),
    ];
    let mut worst = f64::NEG_INFINITY;
    let mut diagnostics = Vec::new();
    for (base, c, a) in &fixtures {
        let scaled = ProblemSpec::new(
            base.ambient.clone(),
            base.region.clone(),
            FrameSpec::scaled(*c, base.frame.clone()),
        );
        let v0 = rho_estimate(base, *a, cfg).map_err(engine_err)?.value.as_f64();
        let v1 = rho_estimate(&scaled, *a, cfg).map_err(engine_err)?.value.as_f64();
        let dev = (v1 - c.norm() * v0).abs() / (c.norm() * v0);
        worst = worst.max(dev);
        diagnostics.push(format!("|c| = {:.3}: base {v0:.8}, scaled {v1:.8}", c.norm()));
    }
    let scaling = PropertyReport::new("scaling/frame-scale", fixtures.len(), worst, 1e-6, diagnostics);

    // Region monotonicity across three nested fixtures.
    let nested: [(ProblemSpec, ProblemSpec, Cx); 3] = [
        (
            ProblemSpec::new(
                DomainSpec::Plane,
                DomainSpec::disk(cx(0.0, 0.0), 0.8),
                FrameSpec::ConstOne,
            ),
            ProblemSpec::new(
                DomainSpec::Plane,
                DomainSpec::disk(cx(0.0, 0.0), 1.3),
                FrameSpec::ConstOne,
            ),
            cx(0.1, 0.0),
        ),
        (
            ProblemSpec::new(
                DomainSpec::Plane,
                DomainSpec::annulus(cx(0.0, 0.0), 0.3, 1.5),
                FrameSpec::ConstOne,
            ),
            ProblemSpec::new(
                DomainSpec::Plane,
                DomainSpec::annulus(cx(0.0, 0.0), 0.2, 2.0),
                FrameSpec::ConstOne,
            ),
            cx(1.0, 0.0),
        ),
        (
            ProblemSpec::new(DomainSpec::Plane, DomainSpec::disk(cx(0.0, 0.0), 1.0), FrameSpec::Exp),
            ProblemSpec::new(DomainSpec::Plane, DomainSpec::disk(cx(0.0, 0.0), 1.8), FrameSpec::Exp),
            cx(0.0, 0.0),
        ),
    ];
    let mut worst_mono = f64::NEG_INFINITY;
    let mut diagnostics = Vec::new();
    for (small, large, a) in &nested {
        let es = rho_estimate(small, *a, cfg).map_err(engine_err)?;
        let el = rho_estimate(large, *a, cfg).map_err(engine_err)?;
        let slack = es.bracket_width() + el.bracket_width();
        let v = (es.value.as_f64() - el.value.as_f64() - slack) / es.value.as_f64().max(1e-300);
        worst_mono = worst_mono.max(v);
        diagnostics.push(format!("small {}, large {}", es.value, el.value));
    }
    let monotonicity =
        PropertyReport::new("scaling/region-monotonicity", nested.len(), worst_mono, 0.0, diagnostics);

    Ok(vec![scaling, monotonicity])
}

pub fn product_suite(cfg: &EngineConfig) -> Result<PropertyReport, CliError> {
    let disk = DomainSpec::disk(cx(0.0, 0.0), 1.0);
    let annulus = DomainSpec::annulus(cx(0.0, 0.0), 0.2, 2.0);
    let fixtures: [(ProblemSpec, Vec<Cx>); 2] = [
        (
            ProblemSpec::new(
                DomainSpec::Product { factors: vec![DomainSpec::Plane, DomainSpec::Plane] },
                DomainSpec::Product { factors: vec![disk.clone(), disk.clone()] },
                FrameSpec::SplitProduct { factors: vec![FrameSpec::ConstOne, FrameSpec::ConstOne] },
            ),
            vec![cx(0.5, 0.0), cx(0.2, 0.0)],
        ),
        (
            ProblemSpec::new(
                DomainSpec::Product { factors: vec![DomainSpec::Plane, DomainSpec::Plane] },
                DomainSpec::Product { factors: vec![disk.clone(), annulus.clone()] },
                FrameSpec::SplitProduct { factors: vec![FrameSpec::ConstOne, FrameSpec::ConstOne] },
            ),
            vec![cx(0.0, 0.3), cx(1.0, 0.5)],
        ),
    ];
    let mut worst = f64::NEG_INFINITY;
    let mut diagnostics = Vec::new();
    for (spec, point) in &fixtures {
        let est = rho_estimate_point(spec, point, cfg).map_err(engine_err)?;
        // The combined value must be the minimum of the per-factor radii.
        let min_factor = est
            .factor_estimates
            .iter()
            .map(|f| f.value)
            .fold(Rho::Unbounded, Rho::min);
        let slack = est.bracket_width();
        let dev = (est.value.as_f64() - min_factor.as_f64()).abs() - slack;
        worst = worst.max(dev);
        // And each factor must agree with an independent one-dimensional run.
        for (factor_spec, (fest, &ai)) in spec
            .split_factors()
            .iter()
            .zip(est.factor_estimates.iter().zip(point))
        {
            let solo = rho_estimate(factor_spec, ai, cfg).map_err(engine_err)?;
            let dev = (fest.value.as_f64() - solo.value.as_f64()).abs()
                - fest.bracket_width()
                - solo.bracket_width();
            worst = worst.max(dev);
        }
        diagnostics.push(format!(
            "value {}, factors [{}]",
            est.value,
            est.factor_estimates
                .iter()
                .map(|f| f.value.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ));
    }
    Ok(PropertyReport::new("product/split-minimum", fixtures.len(), worst, 0.0, diagnostics))
}
