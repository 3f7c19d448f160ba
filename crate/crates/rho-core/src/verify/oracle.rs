//! Exact values of `ρ` where a closed form is known.

use crate::geometry::{DomainSpec, FrameSpec, ProblemSpec};
use crate::types::{Cx, Rho};

/// One closed-form rule: a matcher over problem shapes and the formula it
/// justifies.
pub struct OracleEntry {
    pub name: &'static str,
    /// Which identity backs the formula.
    pub basis: &'static str,
    matches: fn(&ProblemSpec) -> bool,
    formula: fn(&ProblemSpec, &[Cx]) -> Option<Rho>,
}

impl OracleEntry {
    pub fn matches(&self, spec: &ProblemSpec) -> bool {
        (self.matches)(spec)
    }

    pub fn eval(&self, spec: &ProblemSpec, a: &[Cx]) -> Option<Rho> {
        (self.formula)(spec, a)
    }
}

fn is_punctured_pair(spec: &ProblemSpec) -> bool {
    spec.region == DomainSpec::PuncturedPlane && spec.ambient == DomainSpec::PuncturedPlane
}

fn is_plane_pair(spec: &ProblemSpec) -> bool {
    spec.region == DomainSpec::Plane && spec.ambient == DomainSpec::Plane
}

/// The rule table, in match order.
pub fn oracle_table() -> &'static [OracleEntry] {
    &[
        OracleEntry {
            name: "split-product",
            basis: "per-factor radii of a split frame combine by the minimum",
            matches: |s| matches!(s.frame, FrameSpec::SplitProduct { .. }),
            formula: |s, a| {
                let factors = s.split_factors();
                if factors.len() != a.len() {
                    return None;
                }
                let mut acc = Rho::Unbounded;
                for (f, &ai) in factors.iter().zip(a) {
                    acc = acc.min(oracle_rho(f, &[ai])?);
                }
                Some(acc)
            },
        },
        OracleEntry {
            name: "scaled-frame",
            basis: "rescaling the frame by c rescales the integral, so rho scales by |c|",
            matches: |s| matches!(s.frame, FrameSpec::Scaled { .. }),
            formula: |s, a| {
                let FrameSpec::Scaled { c, ref inner } = s.frame else { return None };
                let inner_spec =
                    ProblemSpec::new(s.ambient.clone(), s.region.clone(), (**inner).clone());
                Some(match oracle_rho(&inner_spec, a)? {
                    Rho::Finite(v) => Rho::Finite(c.norm() * v),
                    Rho::Unbounded => Rho::Unbounded,
                })
            },
        },
        OracleEntry {
            name: "unit-frame",
            basis: "for dz the inverse is a translation, so rho is the boundary distance",
            matches: |s| matches!(s.frame, FrameSpec::ConstOne) && s.dim() == 1,
            formula: |s, a| {
                let gap = s.region.boundary_gap(a[0]).ok()?;
                Some(if gap.is_finite() { Rho::Finite(gap) } else { Rho::Unbounded })
            },
        },
        OracleEntry {
            name: "exp-frame-on-plane",
            basis: "the integral of e^z dz inverts to log(e^a + zeta), with branch point at -e^a",
            matches: |s| matches!(s.frame, FrameSpec::Exp) && is_plane_pair(s),
            formula: |_, a| Some(Rho::Finite(a[0].re.exp())),
        },
        OracleEntry {
            name: "monomial-on-punctured-plane",
            basis: "z^k dz integrates to z^{k+1}/(k+1); the inverse dies at the origin image",
            matches: |s| matches!(s.frame, FrameSpec::Monomial { .. }) && is_punctured_pair(s),
            formula: |s, a| {
                let FrameSpec::Monomial { k } = s.frame else { return None };
                let p = k + 1;
                Some(Rho::Finite(a[0].norm().powi(p) / f64::from(p.abs())))
            },
        },
        OracleEntry {
            name: "inv-z-on-punctured-plane",
            basis: "dz/z inverts to a e^zeta, entire with image avoiding the origin",
            matches: |s| matches!(s.frame, FrameSpec::InvZ) && is_punctured_pair(s),
            formula: |_, _| Some(Rho::Unbounded),
        },
    ]
}

/// Exact `ρ(a, Ω)` where a closed form applies; `None` otherwise.
pub fn oracle_rho(spec: &ProblemSpec, a: &[Cx]) -> Option<Rho> {
    if a.len() != spec.dim() {
        return None;
    }
    oracle_table().iter().find(|e| e.matches(spec)).and_then(|e| e.eval(spec, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    #[test]
    fn exp_value() {
        let spec = ProblemSpec::new(DomainSpec::Plane, DomainSpec::Plane, FrameSpec::Exp);
        let v = oracle_rho(&spec, &[cx(1.0, 0.0)]).unwrap();
        assert_eq!(v, Rho::Finite(1.0f64.exp()));
        // region strictly smaller than the plane has no exp closed form
        let spec2 = ProblemSpec::new(
            DomainSpec::Plane,
            DomainSpec::disk(cx(0.0, 0.0), 1.0),
            FrameSpec::Exp,
        );
        assert!(oracle_rho(&spec2, &[cx(0.0, 0.0)]).is_none());
    }

    #[test]
    fn monomial_values() {
        let mk = |k| {
            ProblemSpec::new(
                DomainSpec::PuncturedPlane,
                DomainSpec::PuncturedPlane,
                FrameSpec::Monomial { k },
            )
        };
        assert_eq!(oracle_rho(&mk(-2), &[cx(1.0, 0.0)]), Some(Rho::Finite(1.0)));
        assert_eq!(oracle_rho(&mk(1), &[cx(2.0, 0.0)]), Some(Rho::Finite(2.0)));
        assert_eq!(oracle_rho(&mk(0), &[cx(0.0, 3.0)]), Some(Rho::Finite(3.0)));
        let v = oracle_rho(&mk(2), &[cx(0.5, 0.0)]).unwrap();
        assert!((v.as_f64() - 0.5f64.powi(3) / 3.0).abs() < 1e-15);
    }

    #[test]
    fn boundary_distance_values() {
        let spec = ProblemSpec::new(
            DomainSpec::Plane,
            DomainSpec::disk(cx(0.0, 0.0), 1.0),
            FrameSpec::ConstOne,
        );
        assert_eq!(oracle_rho(&spec, &[cx(0.25, 0.0)]), Some(Rho::Finite(0.75)));
        let plane = ProblemSpec::new(DomainSpec::Plane, DomainSpec::Plane, FrameSpec::ConstOne);
        assert_eq!(oracle_rho(&plane, &[cx(0.0, 0.0)]), Some(Rho::Unbounded));
    }

    #[test]
    fn inv_z_unbounded() {
        let spec = ProblemSpec::new(
            DomainSpec::PuncturedPlane,
            DomainSpec::PuncturedPlane,
            FrameSpec::InvZ,
        );
        assert_eq!(oracle_rho(&spec, &[cx(1.0, 0.0)]), Some(Rho::Unbounded));
    }

    #[test]
    fn scaled_and_product() {
        let spec = ProblemSpec::new(
            DomainSpec::Plane,
            DomainSpec::Plane,
            FrameSpec::scaled(cx(0.0, 3.0), FrameSpec::Exp),
        );
        let v = oracle_rho(&spec, &[cx(1.0, 0.0)]).unwrap();
        assert!((v.as_f64() - 3.0 * 1.0f64.exp()).abs() < 1e-12);

        let disk = DomainSpec::disk(cx(0.0, 0.0), 1.0);
        let prod = ProblemSpec::new(
            DomainSpec::Product { factors: vec![DomainSpec::Plane, DomainSpec::Plane] },
            DomainSpec::Product { factors: vec![disk.clone(), disk] },
            FrameSpec::SplitProduct { factors: vec![FrameSpec::ConstOne, FrameSpec::ConstOne] },
        );
        assert_eq!(
            oracle_rho(&prod, &[cx(0.5, 0.0), cx(0.2, 0.0)]),
            Some(Rho::Finite(0.5))
        );
    }

    #[test]
    fn no_oracle_for_exp_on_disk_region() {
        let spec = ProblemSpec::new(
            DomainSpec::Plane,
            DomainSpec::disk(cx(0.0, 0.0), 2.0),
            FrameSpec::Exp,
        );
        assert!(oracle_rho(&spec, &[cx(0.0, 0.0)]).is_none());
    }
}
