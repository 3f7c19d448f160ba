use rho_core::continuation::{rho_estimate, EngineConfig};
use rho_core::geometry::{DomainSpec, FrameSpec, ProblemSpec};
use rho_core::types::Cx;

fn main() {
    let cfg = EngineConfig::default();
    let punctured = |k| ProblemSpec::new(
        DomainSpec::PuncturedPlane, DomainSpec::PuncturedPlane, FrameSpec::Monomial { k });
    let exp = ProblemSpec::new(DomainSpec::Plane, DomainSpec::Plane, FrameSpec::Exp);
    let mut cases: Vec<(String, ProblemSpec, Cx)> = vec![];
    for &a in &[Cx::new(0.0,0.0), Cx::new(1.0,1.0), Cx::new(-1.0,0.0), Cx::new(0.0,1.0)] {
        cases.push((format!("exp a={a}"), exp.clone(), a));
    }
    for &k in &[-3, -2, 0, 1, 2] {
        for &a in &[Cx::new(0.5,0.0), Cx::new(2.0,0.0), Cx::new(0.0,1.0)] {
            cases.push((format!("monomial k={k} a={a}"), punctured(k), a));
        }
    }
    for (name, spec, a) in cases {
        let t0 = std::time::Instant::now();
        let est = rho_estimate(&spec, a, &cfg).unwrap();
        println!("{name}: value={} rays={} rounds={} elapsed={:?}",
            est.value, est.rays_used, est.refinement_rounds, t0.elapsed());
    }
}
