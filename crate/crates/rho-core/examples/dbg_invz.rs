use rho_core::continuation::{trace_ray, EngineConfig};
use rho_core::geometry::{DomainSpec, FrameSpec, ProblemSpec};
use rho_core::types::Cx;

fn main() {
    let spec = ProblemSpec::new(
        DomainSpec::PuncturedPlane,
        DomainSpec::PuncturedPlane,
        FrameSpec::InvZ,
    );
    let cfg = EngineConfig::default();
    for &theta in &[0.0, std::f64::consts::FRAC_PI_2, std::f64::consts::PI, 4.0] {
        let t0 = std::time::Instant::now();
        let out = trace_ray(&spec, Cx::new(1.0, 0.0), theta, &cfg).unwrap();
        println!(
            "theta={theta:.4} kind={:?} radius={:.4e} steps={} witness={:.3e} min|g|={:.3e} maxdep-elapsed={:?}",
            out.kind, out.failure_radius, out.steps, out.witness.norm(), out.min_abs_g, t0.elapsed()
        );
    }
}
