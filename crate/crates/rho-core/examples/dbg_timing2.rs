use rho_core::continuation::{rho_estimate, EngineConfig};
use rho_core::geometry::{DomainSpec, FrameSpec, ProblemSpec};
use rho_core::types::Cx;

fn main() {
    let cfg = EngineConfig::default();
    let cases: Vec<(String, ProblemSpec, Cx)> = vec![
        ("const-plane (5,-1)".into(),
         ProblemSpec::new(DomainSpec::Plane, DomainSpec::Plane, FrameSpec::ConstOne),
         Cx::new(5.0, -1.0)),
        ("const-plane (0,0)".into(),
         ProblemSpec::new(DomainSpec::Plane, DomainSpec::Plane, FrameSpec::ConstOne),
         Cx::new(0.0, 0.0)),
        ("invz (1,0)".into(),
         ProblemSpec::new(DomainSpec::PuncturedPlane, DomainSpec::PuncturedPlane, FrameSpec::InvZ),
         Cx::new(1.0, 0.0)),
        ("invz (0,-2)".into(),
         ProblemSpec::new(DomainSpec::PuncturedPlane, DomainSpec::PuncturedPlane, FrameSpec::InvZ),
         Cx::new(0.0, -2.0)),
        ("annulus (1,0)".into(),
         ProblemSpec::new(DomainSpec::Plane, DomainSpec::annulus(Cx::new(0.0,0.0), 0.2, 2.0), FrameSpec::ConstOne),
         Cx::new(1.0, 0.0)),
        ("annulus (0.3,0)".into(),
         ProblemSpec::new(DomainSpec::Plane, DomainSpec::annulus(Cx::new(0.0,0.0), 0.2, 2.0), FrameSpec::ConstOne),
         Cx::new(0.3, 0.0)),
        ("monomial -2 (1,0)".into(),
         ProblemSpec::new(DomainSpec::PuncturedPlane, DomainSpec::PuncturedPlane, FrameSpec::Monomial{k:-2}),
         Cx::new(1.0, 0.0)),
        ("monomial -3 (1,0)".into(),
         ProblemSpec::new(DomainSpec::PuncturedPlane, DomainSpec::PuncturedPlane, FrameSpec::Monomial{k:-3}),
         Cx::new(1.0, 0.0)),
        ("monomial 0 (1,0)".into(),
         ProblemSpec::new(DomainSpec::PuncturedPlane, DomainSpec::PuncturedPlane, FrameSpec::Monomial{k:0}),
         Cx::new(1.0, 0.0)),
        ("monomial 1 (1,0)".into(),
         ProblemSpec::new(DomainSpec::PuncturedPlane, DomainSpec::PuncturedPlane, FrameSpec::Monomial{k:1}),
         Cx::new(1.0, 0.0)),
        ("monomial 2 (1,0)".into(),
         ProblemSpec::new(DomainSpec::PuncturedPlane, DomainSpec::PuncturedPlane, FrameSpec::Monomial{k:2}),
         Cx::new(1.0, 0.0)),
    ];
    for (name, spec, a) in cases {
        let t0 = std::time::Instant::now();
        let est = rho_estimate(&spec, a, &cfg).unwrap();
        println!("{name}: value={} rays={} elapsed={:?}", est.value, est.rays_used, t0.elapsed());
    }
}
