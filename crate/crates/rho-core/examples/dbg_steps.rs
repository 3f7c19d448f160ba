use rho_core::continuation::{rho_estimate, trace_ray, EngineConfig};
use rho_core::geometry::{DomainSpec, FrameSpec, ProblemSpec};
use rho_core::types::Cx;

fn main() {
    let cfg = EngineConfig::default();
    let annulus = ProblemSpec::new(
        DomainSpec::Plane,
        DomainSpec::annulus(Cx::new(0.0, 0.0), 0.2, 2.0),
        FrameSpec::ConstOne,
    );
    let a = Cx::new(1.0, 0.3);
    // Steps per ray across the fan
    let mut total_steps = 0usize;
    for j in 0..64 {
        let th = std::f64::consts::TAU * j as f64 / 64.0;
        let out = trace_ray(&annulus, a, th, &cfg).unwrap();
        total_steps += out.steps;
        if j % 16 == 0 {
            println!("ray {j}: kind={:?} steps={} radius={:.4}", out.kind, out.steps, out.failure_radius);
        }
    }
    println!("fan total steps: {total_steps}");
    let t0 = std::time::Instant::now();
    let n = 50;
    for _ in 0..n {
        let _ = rho_estimate(&annulus, a, &cfg).unwrap();
    }
    let per = t0.elapsed() / n;
    let est = rho_estimate(&annulus, a, &cfg).unwrap();
    println!("estimate: value={} rays={} per-call {:?}", est.value, est.rays_used, per);

    let tiny = ProblemSpec::new(
        DomainSpec::Plane,
        DomainSpec::annulus(Cx::new(0.0, 0.0), 1e-6, 1.0),
        FrameSpec::ConstOne,
    );
    let a2 = Cx::new(0.4, 0.1);
    let t0 = std::time::Instant::now();
    for _ in 0..n {
        let _ = rho_estimate(&tiny, a2, &cfg).unwrap();
    }
    let per = t0.elapsed() / n;
    let est = rho_estimate(&tiny, a2, &cfg).unwrap();
    println!("tiny-hole estimate: value={} rays={} per-call {:?}", est.value, est.rays_used, per);
}
