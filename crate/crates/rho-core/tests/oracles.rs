//! Master regression: the continuation engine against every closed-form
//! value of `ρ` the oracle table knows.

use rho_core::continuation::EngineConfig;
use rho_core::geometry::{DomainSpec, FrameSpec, ProblemSpec};
use rho_core::types::Cx;
use rho_core::verify::check_oracles;

fn cx(re: f64, im: f64) -> Cx {
    Cx::new(re, im)
}

fn pts(points: &[Cx]) -> Vec<Vec<Cx>> {
    points.iter().map(|&p| vec![p]).collect()
}

#[test]
fn exp_suite() {
    let spec = ProblemSpec::new(DomainSpec::Plane, DomainSpec::Plane, FrameSpec::Exp);
    let points = pts(&[cx(0.0, 0.0), cx(1.0, 0.0), cx(-1.0, 0.0), cx(0.0, 1.0), cx(1.0, 1.0)]);
    let report = check_oracles(&[(spec, points)], &EngineConfig::default(), 0.02).unwrap();
    assert!(report.pass, "{report:?}");
}

#[test]
fn monomial_suite() {
    let cases: Vec<(ProblemSpec, Vec<Vec<Cx>>)> = [-3, -2, 0, 1, 2]
        .into_iter()
        .map(|k| {
            let spec = ProblemSpec::new(
                DomainSpec::PuncturedPlane,
                DomainSpec::PuncturedPlane,
                FrameSpec::Monomial { k },
            );
            (spec, pts(&[cx(0.5, 0.0), cx(1.0, 0.0), cx(2.0, 0.0), cx(0.0, 1.0)]))
        })
        .collect();
    let report = check_oracles(&cases, &EngineConfig::default(), 0.01).unwrap();
    assert!(report.pass, "{report:?}");
}

#[test]
fn unbounded_suite() {
    let cases = vec![
        (
            ProblemSpec::new(DomainSpec::Plane, DomainSpec::Plane, FrameSpec::ConstOne),
            pts(&[cx(0.0, 0.0), cx(17.0, -3.0)]),
        ),
        (
            ProblemSpec::new(
                DomainSpec::PuncturedPlane,
                DomainSpec::PuncturedPlane,
                FrameSpec::InvZ,
            ),
            pts(&[cx(1.0, 0.0), cx(0.0, -2.0)]),
        ),
    ];
    let report = check_oracles(&cases, &EngineConfig::default(), 0.01).unwrap();
    assert!(report.pass, "{report:?}");
}

#[test]
fn boundary_distance_suite() {
    let disk = ProblemSpec::new(
        DomainSpec::Plane,
        DomainSpec::disk(cx(0.0, 0.0), 1.0),
        FrameSpec::ConstOne,
    );
    let annulus = ProblemSpec::new(
        DomainSpec::Plane,
        DomainSpec::annulus(cx(0.0, 0.0), 0.2, 2.0),
        FrameSpec::ConstOne,
    );
    let pentagon = ProblemSpec::new(
        DomainSpec::Plane,
        DomainSpec::Polygon {
            vertices: vec![
                cx(1.2, 0.0),
                cx(0.4, 1.1),
                cx(-1.0, 0.7),
                cx(-1.0, -0.7),
                cx(0.4, -1.1),
            ],
        },
        FrameSpec::ConstOne,
    );
    let cases = vec![
        (disk, pts(&[cx(0.25, 0.0), cx(0.0, 0.0), cx(-0.6, 0.3)])),
        (annulus, pts(&[cx(1.0, 0.0), cx(0.3, 0.0), cx(0.0, -1.8)])),
        (pentagon, pts(&[cx(0.0, 0.0), cx(0.5, 0.2), cx(-0.5, -0.3)])),
    ];
    let report = check_oracles(&cases, &EngineConfig::default(), 0.01).unwrap();
    assert!(report.pass, "{report:?}");
}

#[test]
fn scaled_and_product_suite() {
    let scaled_exp = ProblemSpec::new(
        DomainSpec::Plane,
        DomainSpec::Plane,
        FrameSpec::scaled(cx(0.0, 3.0), FrameSpec::Exp),
    );
    let scaled_disk = ProblemSpec::new(
        DomainSpec::Plane,
        DomainSpec::disk(cx(0.0, 0.0), 1.0),
        FrameSpec::scaled(cx(-2.0, 0.0), FrameSpec::ConstOne),
    );
    let bidisk = ProblemSpec::new(
        DomainSpec::Product { factors: vec![DomainSpec::Plane, DomainSpec::Plane] },
        DomainSpec::Product {
            factors: vec![
                DomainSpec::disk(cx(0.0, 0.0), 1.0),
                DomainSpec::disk(cx(0.0, 0.0), 1.0),
            ],
        },
        FrameSpec::SplitProduct { factors: vec![FrameSpec::ConstOne, FrameSpec::ConstOne] },
    );
    let cases = vec![
        (scaled_exp, pts(&[cx(0.5, 0.5), cx(-1.0, 0.0)])),
        (scaled_disk, pts(&[cx(0.25, 0.0)])),
        (bidisk, vec![vec![cx(0.5, 0.0), cx(0.2, 0.0)], vec![cx(0.0, 0.0), cx(0.0, -0.9)]]),
    ];
    let report = check_oracles(&cases, &EngineConfig::default(), 0.01).unwrap();
    assert!(report.pass, "{report:?}");
}
