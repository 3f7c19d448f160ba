//! Property tests for the geometry and engine invariants.

use proptest::prelude::*;

use rho_core::continuation::{
    abelian_integral_polyline, phi_eval_with_path, rho_estimate, EngineConfig,
};
use rho_core::geometry::{DomainSpec, FrameSpec, ProblemSpec};
use rho_core::hulls::{hull_compute, Raster};
use rho_core::types::{Cx, Rho};

fn cx(re: f64, im: f64) -> Cx {
    Cx::new(re, im)
}

fn test_domains() -> Vec<DomainSpec> {
    vec![
        DomainSpec::disk(cx(0.3, -0.2), 1.5),
        DomainSpec::annulus(cx(0.0, 0.0), 0.2, 2.0),
        DomainSpec::HalfPlane { base: cx(0.0, 0.0), direction: cx(1.0, 0.0) },
        DomainSpec::Polygon {
            vertices: vec![cx(-1.0, -1.0), cx(1.5, -0.8), cx(1.2, 1.3), cx(-0.9, 1.0)],
        },
        DomainSpec::PuncturedPlane,
    ]
}

proptest! {
    /// boundary_gap is defined exactly on the open set: Ok and positive
    /// inside, an error outside.
    #[test]
    fn contains_is_consistent_with_gap(
        idx in 0usize..5,
        re in -3.0f64..3.0,
        im in -3.0f64..3.0,
    ) {
        let domain = &test_domains()[idx];
        let z = cx(re, im);
        match domain.boundary_gap(z) {
            Ok(gap) => {
                prop_assert!(domain.contains(z));
                prop_assert!(gap > 0.0);
            }
            Err(_) => prop_assert!(!domain.contains(z)),
        }
    }

    /// The boundary distance is 1-Lipschitz.
    #[test]
    fn boundary_gap_is_one_lipschitz(
        idx in 0usize..5,
        re1 in -3.0f64..3.0,
        im1 in -3.0f64..3.0,
        re2 in -3.0f64..3.0,
        im2 in -3.0f64..3.0,
    ) {
        let domain = &test_domains()[idx];
        let (b, c) = (cx(re1, im1), cx(re2, im2));
        if let (Ok(gb), Ok(gc)) = (domain.boundary_gap(b), domain.boundary_gap(c)) {
            if gb.is_finite() && gc.is_finite() {
                prop_assert!((gb - gc).abs() <= (b - c).norm() + 1e-12);
            }
        }
    }

    /// Frame scaling is exact, not approximate.
    #[test]
    fn scaled_frame_multiplies_exactly(
        re in -2.0f64..2.0,
        im in -2.0f64..2.0,
        cre in -3.0f64..3.0,
        cim in -3.0f64..3.0,
    ) {
        prop_assume!(cre.abs() + cim.abs() > 1e-3);
        prop_assume!(re.abs() + im.abs() > 1e-3);
        let c = cx(cre, cim);
        let z = cx(re, im);
        for inner in [FrameSpec::ConstOne, FrameSpec::Exp, FrameSpec::Monomial { k: 2 }] {
            let scaled = FrameSpec::scaled(c, inner.clone());
            prop_assert_eq!(scaled.eval(z), c * inner.eval(z));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Hull idempotence and monotonicity over random cell sets.
    #[test]
    fn hull_idempotent_and_monotone(seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let region = DomainSpec::disk(cx(0.0, 0.0), 2.0);
        let raster = Raster::build(&region, (cx(-2.0, -2.0), cx(2.0, 2.0)), 32, 32).unwrap();
        let mut k1 = vec![false; 32 * 32];
        let mut k2 = vec![false; 32 * 32];
        for idx in 0..k1.len() {
            if raster.mask[idx] {
                let r: f64 = rng.gen();
                if r < 0.15 {
                    k1[idx] = true;
                }
                if k1[idx] || r < 0.25 {
                    k2[idx] = true; // k2 is a superset of k1
                }
            }
        }
        let h1 = hull_compute(&k1, &region, &raster).unwrap();
        let h2 = hull_compute(&k2, &region, &raster).unwrap();
        let h1h = hull_compute(&h1.hull_mask, &region, &raster).unwrap();
        prop_assert_eq!(&h1h.hull_mask, &h1.hull_mask, "idempotence");
        for idx in 0..k1.len() {
            prop_assert!(!h1.hull_mask[idx] || h2.hull_mask[idx], "monotonicity at {}", idx);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// Forward-integrating the frame along the traced path recovers zeta.
    #[test]
    fn inverse_property_exp_frame(
        are in -0.5f64..0.5,
        aim in -0.5f64..0.5,
        arg in 0.0f64..std::f64::consts::TAU,
        frac in 0.1f64..0.9,
    ) {
        let cfg = EngineConfig::default();
        let spec = ProblemSpec::new(DomainSpec::Plane, DomainSpec::Plane, FrameSpec::Exp);
        let a = cx(are, aim);
        let rho = are.exp();
        let zeta = Cx::from_polar(frac * 0.9 * rho, arg);
        let (_, path) = phi_eval_with_path(&spec, a, zeta, &cfg).unwrap();
        let points: Vec<Cx> = path.iter().map(|&(_, z)| z).collect();
        let alpha = abelian_integral_polyline(&FrameSpec::Exp, &points);
        let tol = 10.0 * cfg.rtol * zeta.norm() + cfg.atol;
        prop_assert!((alpha - zeta).norm() <= tol.max(1e-10),
            "alpha {} vs zeta {}", alpha, zeta);
    }

    /// rho scales by |c| when the frame is scaled by c.
    #[test]
    fn rho_scales_with_the_frame(
        cre in -2.0f64..2.0,
        cim in -2.0f64..2.0,
        are in -0.4f64..0.4,
        aim in -0.4f64..0.4,
    ) {
        prop_assume!(cx(cre, cim).norm() > 0.1);
        let cfg = EngineConfig::default();
        let a = cx(are, aim);
        let base = ProblemSpec::new(DomainSpec::Plane, DomainSpec::Plane, FrameSpec::Exp);
        let scaled = ProblemSpec::new(
            DomainSpec::Plane,
            DomainSpec::Plane,
            FrameSpec::scaled(cx(cre, cim), FrameSpec::Exp),
        );
        let v0 = rho_estimate(&base, a, &cfg).unwrap().value.as_f64();
        let v1 = rho_estimate(&scaled, a, &cfg).unwrap().value.as_f64();
        let expected = cx(cre, cim).norm() * v0;
        prop_assert!((v1 - expected).abs() / expected < 1e-6, "{} vs {}", v1, expected);
    }

    /// Growing the region never shrinks rho (up to the bracket width).
    #[test]
    fn region_monotonicity(
        r1 in 0.5f64..1.0,
        extra in 0.05f64..1.0,
        are in -0.3f64..0.3,
        aim in -0.3f64..0.3,
    ) {
        let cfg = EngineConfig::default();
        let a = cx(are, aim);
        let small = ProblemSpec::new(
            DomainSpec::Plane,
            DomainSpec::disk(cx(0.0, 0.0), r1),
            FrameSpec::ConstOne,
        );
        let large = ProblemSpec::new(
            DomainSpec::Plane,
            DomainSpec::disk(cx(0.0, 0.0), r1 + extra),
            FrameSpec::ConstOne,
        );
        let v_small = rho_estimate(&small, a, &cfg).unwrap();
        let v_large = rho_estimate(&large, a, &cfg).unwrap();
        let slack = v_small.bracket_width() + v_large.bracket_width();
        prop_assert!(
            v_small.value.as_f64() <= v_large.value.as_f64() + slack,
            "{:?} vs {:?}", v_small.value, v_large.value
        );
    }

    /// Translating region and basepoint together leaves rho unchanged for
    /// the unit frame.
    #[test]
    fn translation_covariance_unit_frame(
        tre in -2.0f64..2.0,
        tim in -2.0f64..2.0,
        are in -0.5f64..0.5,
        aim in -0.5f64..0.5,
    ) {
        let cfg = EngineConfig::default();
        let t = cx(tre, tim);
        let a = cx(are, aim);
        let here = ProblemSpec::new(
            DomainSpec::Plane,
            DomainSpec::disk(cx(0.0, 0.0), 1.0),
            FrameSpec::ConstOne,
        );
        let there = ProblemSpec::new(
            DomainSpec::Plane,
            DomainSpec::disk(t, 1.0),
            FrameSpec::ConstOne,
        );
        let v0 = rho_estimate(&here, a, &cfg).unwrap().value.as_f64();
        let v1 = rho_estimate(&there, a + t, &cfg).unwrap().value.as_f64();
        prop_assert!((v0 - v1).abs() <= 1e-6 * v0.max(1.0), "{} vs {}", v0, v1);
    }
}

/// A denser initial fan may only sharpen the estimate: the value never
/// increases by more than the bracket tolerance.
#[test]
fn denser_fan_is_monotone() {
    let specs = [
        ProblemSpec::new(DomainSpec::Plane, DomainSpec::Plane, FrameSpec::Exp),
        ProblemSpec::new(
            DomainSpec::Plane,
            DomainSpec::annulus(cx(0.0, 0.0), 0.2, 2.0),
            FrameSpec::ConstOne,
        ),
    ];
    let points = [cx(1.0, 0.5), cx(0.8, 0.3)];
    for (spec, a) in specs.iter().zip(points) {
        let mut coarse_cfg = EngineConfig::default();
        coarse_cfg.n_rays_init = 64;
        let mut dense_cfg = EngineConfig::default();
        dense_cfg.n_rays_init = 256;
        let coarse = rho_estimate(spec, a, &coarse_cfg).unwrap();
        let dense = rho_estimate(spec, a, &dense_cfg).unwrap();
        match (coarse.value, dense.value) {
            (Rho::Finite(c), Rho::Finite(d)) => {
                assert!(
                    d <= c + coarse_cfg.bisect_tol * c,
                    "denser fan increased the value: {c} -> {d}"
                );
            }
            (c, d) => panic!("expected finite values, got {c:?} / {d:?}"),
        }
    }
}

/// The minimum over the returned fan is what the estimate reports.
#[test]
fn estimate_value_is_fan_minimum() {
    let spec = ProblemSpec::new(
        DomainSpec::Plane,
        DomainSpec::disk(cx(0.0, 0.0), 1.0),
        FrameSpec::ConstOne,
    );
    let cfg = EngineConfig::default();
    let est = rho_estimate(&spec, cx(0.3, 0.1), &cfg).unwrap();
    let theta = est.argmin_theta.unwrap();
    let ray = rho_core::continuation::trace_ray(&spec, cx(0.3, 0.1), theta, &cfg).unwrap();
    assert_eq!(Rho::Finite(ray.failure_radius), est.value);
    assert!(est.lower <= est.value.as_f64());
}
